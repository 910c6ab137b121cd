//! Particles, particle systems and the cluster partitions both the predictor
//! and the simulator report.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Particle {
    pub mass: Rational,
    pub position: Rational,
    pub velocity: Rational,
}

impl Particle {
    pub fn new(mass: Rational, position: Rational, velocity: Rational) -> Self {
        Particle {
            mass,
            position,
            velocity,
        }
    }

    pub fn momentum(&self) -> Rational {
        &self.mass * &self.velocity
    }
}

/// A non-empty sequence of particles with strictly increasing positions and
/// positive masses. Indices exposed to callers are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParticleSystem {
    particles: Vec<Particle>,
}

impl ParticleSystem {
    pub fn new(particles: Vec<Particle>) -> Result<Self> {
        if particles.is_empty() {
            return Err(Error::Validation("a system needs at least one particle".into()));
        }
        for (i, p) in particles.iter().enumerate() {
            if !p.mass.is_positive() {
                return Err(Error::Validation(format!(
                    "particle {} has non-positive mass {}",
                    i + 1,
                    p.mass
                )));
            }
        }
        for (i, w) in particles.windows(2).enumerate() {
            if w[0].position >= w[1].position {
                return Err(Error::Validation(format!(
                    "positions must be strictly increasing: particle {} at {} is not left of particle {} at {}",
                    i + 1,
                    w[0].position,
                    i + 2,
                    w[1].position
                )));
            }
        }
        Ok(ParticleSystem { particles })
    }

    /// Unit masses at positions `1..=n` with the given velocities.
    pub fn unit_masses(velocities: &[Rational]) -> Result<Self> {
        let particles = velocities
            .iter()
            .enumerate()
            .map(|(i, v)| Particle::new(Rational::one(), Rational::from(i as i64 + 1), v.clone()))
            .collect();
        ParticleSystem::new(particles)
    }

    /// Unit masses at `1..=n`, velocity `+1` where `up[i]` holds and `-1` otherwise.
    pub fn unit_pm_one(up: impl IntoIterator<Item = bool>) -> Result<Self> {
        let velocities: Vec<Rational> = up
            .into_iter()
            .map(|u| Rational::from(if u { 1 } else { -1 }))
            .collect();
        ParticleSystem::unit_masses(&velocities)
    }

    /// Same masses and velocities, new positions.
    pub fn with_positions(&self, positions: &[Rational]) -> Result<Self> {
        if positions.len() != self.len() {
            return Err(Error::Validation(format!(
                "expected {} positions, got {}",
                self.len(),
                positions.len()
            )));
        }
        let particles = self
            .particles
            .iter()
            .zip(positions)
            .map(|(p, x)| Particle::new(p.mass.clone(), x.clone(), p.velocity.clone()))
            .collect();
        ParticleSystem::new(particles)
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    /// 1-based access.
    pub fn particle(&self, index: usize) -> Result<&Particle> {
        if index == 0 || index > self.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.len(),
            });
        }
        Ok(&self.particles[index - 1])
    }

    pub fn total_mass(&self) -> Rational {
        self.particles.iter().map(|p| &p.mass).sum()
    }

    pub fn total_momentum(&self) -> Rational {
        self.particles.iter().map(Particle::momentum).sum()
    }
}

/// Inclusive 1-based range of particle indices, serialized as `[first, last]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MemberRange {
    pub first: usize,
    pub last: usize,
}

impl MemberRange {
    pub fn new(first: usize, last: usize) -> Self {
        debug_assert!(1 <= first && first <= last);
        MemberRange { first, last }
    }

    pub fn len(&self) -> usize {
        self.last - self.first + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, index: usize) -> bool {
        self.first <= index && index <= self.last
    }

    pub fn contains_range(&self, other: &MemberRange) -> bool {
        self.first <= other.first && other.last <= self.last
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        self.first..=self.last
    }
}

impl Serialize for MemberRange {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.first, self.last].serialize(serializer)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cluster {
    pub members: MemberRange,
    pub mass: Rational,
    pub velocity: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClusterSet {
    pub clusters: Vec<Cluster>,
}

impl ClusterSet {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn total_mass(&self) -> Rational {
        self.clusters.iter().map(|c| &c.mass).sum()
    }

    pub fn total_momentum(&self) -> Rational {
        self.clusters.iter().map(|c| &c.mass * &c.velocity).sum()
    }

    /// Member ranges only; what "same partition" means.
    pub fn partition(&self) -> Vec<MemberRange> {
        self.clusters.iter().map(|c| c.members).collect()
    }

    /// Checks the structural invariants against `system`: ranges tile
    /// `1..=n` in order, masses and momenta add up, velocities never decrease.
    pub fn check_against(&self, system: &ParticleSystem) -> Result<()> {
        let fail = |msg: String| Err(Error::Validation(msg));
        let mut next = 1;
        for c in &self.clusters {
            if c.members.first != next {
                return fail(format!("cluster ranges do not tile: expected start {next}, got {:?}", c.members));
            }
            let mass: Rational = c
                .members
                .indices()
                .map(|i| system.particles[i - 1].mass.clone())
                .sum();
            let momentum: Rational = c
                .members
                .indices()
                .map(|i| system.particles[i - 1].momentum())
                .sum();
            if mass != c.mass || momentum != &c.mass * &c.velocity {
                return fail(format!("cluster {:?} does not conserve mass/momentum", c.members));
            }
            next = c.members.last + 1;
        }
        if next != system.len() + 1 {
            return fail(format!("cluster ranges stop at {} of {}", next - 1, system.len()));
        }
        if self.clusters.windows(2).any(|w| w[0].velocity > w[1].velocity) {
            return fail("cluster velocities decrease left to right".into());
        }
        Ok(())
    }
}
