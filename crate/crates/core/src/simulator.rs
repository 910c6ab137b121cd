//! Event-driven exact simulation of perfectly inelastic (sticky) collisions
//! on the line.
//!
//! Clusters move ballistically between events. At each step the earliest
//! meeting time over adjacent pairs is found exactly, every cluster is
//! advanced to it, and each maximal run of co-located clusters is fused into
//! one whose velocity is the mass-weighted mean of the run. This is the
//! physical oracle that the diagram predictor is checked against.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::Rational;
use crate::svg::{Frame, SvgWriter};
use crate::system::{Cluster, ClusterSet, MemberRange, ParticleSystem};

/// A cluster between two events.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimClusterState {
    pub members: MemberRange,
    pub mass: Rational,
    pub momentum: Rational,
    pub velocity: Rational,
    /// Position at time `since`.
    pub position: Rational,
    pub since: Rational,
}

impl SimClusterState {
    pub fn position_at(&self, t: &Rational) -> Rational {
        &self.position + &self.velocity * (t - &self.since)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollisionEvent {
    pub time: Rational,
    pub position: Rational,
    /// Member ranges of the clusters that fused, left to right.
    pub merged: Vec<MemberRange>,
    /// Range of the fused cluster.
    #[serde(skip)]
    pub result: MemberRange,
    /// Velocity of the fused cluster.
    #[serde(skip)]
    pub velocity: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimulationResult {
    /// Ordered by time; events sharing a time are ordered left to right.
    pub events: Vec<CollisionEvent>,
    #[serde(skip)]
    pub final_states: Vec<SimClusterState>,
    #[serde(rename = "clusters")]
    pub final_clusters: ClusterSet,
}

/// Earliest future time at which `left` and `right` coincide, if any.
/// With `left` strictly to the left, they meet iff `left` is faster.
fn meeting_time(left: &SimClusterState, right: &SimClusterState) -> Option<Rational> {
    if left.velocity <= right.velocity {
        return None;
    }
    // intercepts of x(t) = b + v t
    let b_left = &left.position - &left.velocity * &left.since;
    let b_right = &right.position - &right.velocity * &right.since;
    Some((b_right - b_left) / (&left.velocity - &right.velocity))
}

pub fn simulate(system: &ParticleSystem) -> SimulationResult {
    let mut clusters: Vec<SimClusterState> = system
        .particles()
        .iter()
        .enumerate()
        .map(|(i, p)| SimClusterState {
            members: MemberRange::new(i + 1, i + 1),
            mass: p.mass.clone(),
            momentum: p.momentum(),
            velocity: p.velocity.clone(),
            position: p.position.clone(),
            since: Rational::zero(),
        })
        .collect();
    let mut events = Vec::new();

    loop {
        let next = clusters
            .windows(2)
            .filter_map(|w| meeting_time(&w[0], &w[1]))
            .min();
        let Some(t) = next else { break };

        let positions: Vec<Rational> = clusters.iter().map(|c| c.position_at(&t)).collect();
        let mut merged_clusters = Vec::with_capacity(clusters.len());
        let mut start = 0;
        while start < clusters.len() {
            let mut end = start + 1;
            while end < clusters.len() && positions[end] == positions[start] {
                end += 1;
            }
            let run = &clusters[start..end];
            if run.len() == 1 {
                merged_clusters.push(run[0].clone());
            } else {
                let mass: Rational = run.iter().map(|c| &c.mass).sum();
                let momentum: Rational = run.iter().map(|c| &c.momentum).sum();
                let velocity = &momentum / &mass;
                let members = MemberRange::new(run[0].members.first, run[run.len() - 1].members.last);
                events.push(CollisionEvent {
                    time: t.clone(),
                    position: positions[start].clone(),
                    merged: run.iter().map(|c| c.members).collect(),
                    result: members,
                    velocity: velocity.clone(),
                });
                merged_clusters.push(SimClusterState {
                    members,
                    mass,
                    momentum,
                    velocity,
                    position: positions[start].clone(),
                    since: t.clone(),
                });
            }
            start = end;
        }
        debug_assert!(merged_clusters.len() < clusters.len());
        clusters = merged_clusters;
    }

    let final_clusters = ClusterSet {
        clusters: clusters
            .iter()
            .map(|c| Cluster {
                members: c.members,
                mass: c.mass.clone(),
                velocity: c.velocity.clone(),
            })
            .collect(),
    };
    SimulationResult {
        events,
        final_states: clusters,
        final_clusters,
    }
}

/// Position of particle `index` (1-based) at time `t`, replayed from the
/// event log.
pub fn position_at(
    result: &SimulationResult,
    system: &ParticleSystem,
    index: usize,
    t: &Rational,
) -> Result<Rational> {
    let particle = system.particle(index)?;
    if t.is_negative() {
        return Err(Error::Domain(format!("time must be non-negative, got {t}")));
    }
    let mut position = particle.position.clone();
    let mut velocity = particle.velocity.clone();
    let mut since = Rational::zero();
    for e in result.events.iter().take_while(|e| &e.time <= t) {
        if e.result.contains(index) {
            position = e.position.clone();
            velocity = e.velocity.clone();
            since = e.time.clone();
        }
    }
    Ok(position + velocity * (t - since))
}

#[derive(Clone, Debug)]
pub struct TrajectorySvgOptions {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
}

impl Default for TrajectorySvgOptions {
    fn default() -> Self {
        TrajectorySvgOptions {
            width: 640.0,
            height: 480.0,
            margin: 40.0,
        }
    }
}

/// World lines of every particle on `[0, t_max]`, position across and time up,
/// with a marker at each collision inside the window.
pub fn trajectories_svg(
    result: &SimulationResult,
    system: &ParticleSystem,
    t_max: &Rational,
    options: &TrajectorySvgOptions,
) -> Result<String> {
    if !t_max.is_positive() {
        return Err(Error::Domain(format!("t_max must be positive, got {t_max}")));
    }
    let visible: Vec<&CollisionEvent> = result.events.iter().filter(|e| &e.time <= t_max).collect();

    let mut lines: Vec<Vec<(f64, f64)>> = Vec::with_capacity(system.len());
    for (i, p) in system.particles().iter().enumerate() {
        let index = i + 1;
        let mut line = vec![(p.position.to_f64(), 0.0)];
        for e in visible.iter().filter(|e| e.result.contains(index) && &e.time < t_max) {
            line.push((e.position.to_f64(), e.time.to_f64()));
        }
        line.push((position_at(result, system, index, t_max)?.to_f64(), t_max.to_f64()));
        lines.push(line);
    }

    let xs: Vec<f64> = lines.iter().flatten().map(|&(x, _)| x).collect();
    let ts: Vec<f64> = lines.iter().flatten().map(|&(_, t)| t).collect();
    let frame = Frame::fit(&xs, &ts, options.width, options.height, options.margin);
    let mut svg = SvgWriter::new(options.width, options.height);
    svg.axes(&frame, "x", "t");
    for (i, line) in lines.iter().enumerate() {
        svg.polyline(&frame, line, "#1f4e9c", 1.5, None, &format!("particle-{}", i + 1));
    }
    for e in visible {
        svg.marker(
            &frame,
            e.position.to_f64(),
            e.time.to_f64(),
            3.5,
            "#c0392b",
            &format!("t={} x={}", e.time, e.position),
        );
    }
    Ok(svg.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::Particle;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn figure_one() -> ParticleSystem {
        let vs: Vec<Rational> = [1, -1, -1, 1, -1, 1].iter().map(|&v| Rational::from(v)).collect();
        ParticleSystem::unit_masses(&vs).unwrap()
    }

    #[test]
    fn figure_one_events() {
        let r = simulate(&figure_one());
        let got: Vec<_> = r
            .events
            .iter()
            .map(|e| (e.time.to_string(), e.position.to_string(), e.result.first, e.result.last))
            .collect();
        assert_eq!(
            got,
            vec![
                ("1/2".into(), "3/2".into(), 1, 2),
                ("1/2".into(), "9/2".into(), 4, 5),
                ("3/2".into(), "3/2".into(), 1, 3),
            ]
        );
        assert_eq!(r.events[2].merged, vec![MemberRange::new(1, 2), MemberRange::new(3, 3)]);
        let fin: Vec<_> = r
            .final_clusters
            .clusters
            .iter()
            .map(|c| (c.members.first, c.members.last, c.velocity.to_string()))
            .collect();
        assert_eq!(fin, vec![(1, 3, "-1/3".into()), (4, 5, "0".into()), (6, 6, "1".into())]);
    }

    #[test]
    fn single_particle_has_no_events() {
        let s = ParticleSystem::new(vec![Particle::new(q("2"), q("1"), q("-3"))]).unwrap();
        let r = simulate(&s);
        assert!(r.events.is_empty());
        assert_eq!(r.final_clusters.clusters[0].velocity, q("-3"));
    }

    #[test]
    fn head_on_pair() {
        let s = ParticleSystem::new(vec![
            Particle::new(q("1"), q("0"), q("1")),
            Particle::new(q("1"), q("1"), q("-1")),
        ])
        .unwrap();
        let r = simulate(&s);
        assert_eq!(r.events.len(), 1);
        assert_eq!(r.events[0].time, q("1/2"));
        assert_eq!(r.events[0].position, q("1/2"));
        assert_eq!(r.final_clusters.clusters[0].velocity, Rational::zero());
    }

    #[test]
    fn three_way_simultaneous_merge() {
        // all three reach x = 0 at t = 1
        let s = ParticleSystem::new(vec![
            Particle::new(q("1"), q("-1"), q("1")),
            Particle::new(q("2"), q("0"), q("0")),
            Particle::new(q("3"), q("1"), q("-1")),
        ])
        .unwrap();
        let r = simulate(&s);
        assert_eq!(r.events.len(), 1);
        assert_eq!(r.events[0].merged.len(), 3);
        assert_eq!(r.events[0].time, q("1"));
        assert_eq!(r.final_clusters.clusters[0].velocity, q("-1/3"));
    }

    #[test]
    fn replayed_positions() {
        let s = figure_one();
        let r = simulate(&s);
        assert_eq!(position_at(&r, &s, 1, &q("0")).unwrap(), q("1"));
        assert_eq!(position_at(&r, &s, 2, &q("1/2")).unwrap(), q("3/2"));
        // between events particle 1 rests at 3/2 with its partner
        assert_eq!(position_at(&r, &s, 1, &q("1")).unwrap(), q("3/2"));
        assert_eq!(position_at(&r, &s, 3, &q("1")).unwrap(), q("2"));
        assert_eq!(position_at(&r, &s, 1, &q("5/2")).unwrap(), q("7/6"));
        assert_eq!(position_at(&r, &s, 6, &q("2")).unwrap(), q("8"));
        assert!(matches!(
            position_at(&r, &s, 7, &q("1")),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(position_at(&r, &s, 1, &q("-1")).is_err());
    }

    #[test]
    fn trajectory_svg_structure() {
        let s = figure_one();
        let r = simulate(&s);
        let opts = TrajectorySvgOptions::default();
        let a = trajectories_svg(&r, &s, &q("2"), &opts).unwrap();
        assert_eq!(a, trajectories_svg(&r, &s, &q("2"), &opts).unwrap());
        assert_eq!(a.matches("<polyline").count(), 6);
        assert_eq!(a.matches("<circle").count(), 3);
        assert!(trajectories_svg(&r, &s, &q("0"), &opts).is_err());

        let one = ParticleSystem::new(vec![Particle::new(q("1"), q("0"), q("1"))]).unwrap();
        let r1 = simulate(&one);
        let svg = trajectories_svg(&r1, &one, &q("3"), &opts).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        let pts = svg.lines().find(|l| l.contains("<polyline")).unwrap();
        let coords = pts.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(coords.split(' ').count(), 2);
    }
}
