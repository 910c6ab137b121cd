//! Cumulative momentum diagrams and the cluster prediction read off them.
//!
//! The diagram is the polyline through `P_k = (sum of masses, sum of
//! momenta)` over the first `k` particles. Its lower convex envelope touches
//! the polyline at a set of *contact* points; each pair of consecutive
//! contacts bounds one polygon, and each polygon is one asymptotic cluster
//! whose velocity is the slope of the envelope edge under it.
//!
//! Positions never enter: two systems with the same masses and velocities
//! in the same order produce the same prediction.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{orientation, slope, Point2D, Rational};
use crate::svg::{Frame, SvgWriter};
use crate::system::{Cluster, ClusterSet, MemberRange, ParticleSystem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MomentumDiagram {
    /// `P_0 ..= P_n`, with `P_0 = (0, 0)`.
    pub points: Vec<Point2D>,
}

impl MomentumDiagram {
    /// Number of particles, i.e. `points.len() - 1`.
    pub fn n(&self) -> usize {
        self.points.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Envelope {
    /// Every `k` with `P_k` on the envelope, collinear edge points included.
    pub contact_indices: Vec<usize>,
    /// Hull vertices only (corners of the envelope).
    pub vertex_indices: Vec<usize>,
    /// Slope of each edge between consecutive hull vertices; strictly increasing.
    pub edge_slopes: Vec<Rational>,
}

impl Envelope {
    /// Value of the envelope at abscissa `x`, which must lie inside the diagram.
    pub fn value_at(&self, diagram: &MomentumDiagram, x: &Rational) -> Rational {
        let pts = &diagram.points;
        let edge = self
            .vertex_indices
            .windows(2)
            .find(|w| &pts[w[1]].x >= x)
            .unwrap_or_else(|| {
                let n = self.vertex_indices.len();
                &self.vertex_indices[n.saturating_sub(2)..]
            });
        let a = &pts[edge[0]];
        if edge.len() < 2 {
            return a.y.clone();
        }
        let b = &pts[edge[1]];
        let s = slope(a, b).expect("hull vertices have distinct x");
        &a.y + s * (x - &a.x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Polygon {
    pub members: MemberRange,
    pub slope: Rational,
    /// A single diagram segment lying on the envelope.
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolygonDecomposition {
    pub polygons: Vec<Polygon>,
}

pub fn build_momentum_diagram(system: &ParticleSystem) -> MomentumDiagram {
    let mut points = Vec::with_capacity(system.len() + 1);
    let mut cur = Point2D::new(0, 0);
    points.push(cur.clone());
    for p in system.particles() {
        cur = Point2D {
            x: &cur.x + &p.mass,
            y: &cur.y + p.momentum(),
        };
        points.push(cur.clone());
    }
    MomentumDiagram { points }
}

/// Lower convex envelope of the diagram.
///
/// A monotone-chain pass (points are already sorted by `x`) finds the hull
/// vertices; a second exact scan admits every point lying on a hull edge.
pub fn lower_convex_envelope(diagram: &MomentumDiagram) -> Envelope {
    let pts = &diagram.points;
    let mut hull: Vec<usize> = Vec::with_capacity(pts.len());
    for k in 0..pts.len() {
        while hull.len() >= 2 {
            let a = &pts[hull[hull.len() - 2]];
            let b = &pts[hull[hull.len() - 1]];
            // keep b only if a -> b -> P_k turns strictly left
            if orientation(a, b, &pts[k]) == Ordering::Greater {
                break;
            }
            hull.pop();
        }
        hull.push(k);
    }

    let mut contacts = Vec::with_capacity(pts.len());
    contacts.push(hull[0]);
    for w in hull.windows(2) {
        let (a, b) = (&pts[w[0]], &pts[w[1]]);
        contacts.extend(
            (w[0] + 1..w[1]).filter(|&k| orientation(a, b, &pts[k]) == Ordering::Equal),
        );
        contacts.push(w[1]);
    }

    let edge_slopes = hull
        .windows(2)
        .map(|w| slope(&pts[w[0]], &pts[w[1]]).expect("diagram abscissae strictly increase"))
        .collect();

    Envelope {
        contact_indices: contacts,
        vertex_indices: hull,
        edge_slopes,
    }
}

/// One polygon per pair of consecutive contacts.
pub fn decompose_polygons(diagram: &MomentumDiagram, envelope: &Envelope) -> PolygonDecomposition {
    let pts = &diagram.points;
    let polygons = envelope
        .contact_indices
        .windows(2)
        .map(|w| Polygon {
            members: MemberRange::new(w[0] + 1, w[1]),
            slope: slope(&pts[w[0]], &pts[w[1]]).expect("diagram abscissae strictly increase"),
            degenerate: w[1] == w[0] + 1,
        })
        .collect();
    PolygonDecomposition { polygons }
}

/// Predicted asymptotic clusters: one per polygon, moving with the polygon's
/// slope and carrying the polygon's mass.
pub fn predict_clusters(system: &ParticleSystem) -> ClusterSet {
    let diagram = build_momentum_diagram(system);
    let envelope = lower_convex_envelope(&diagram);
    clusters_from(&diagram, &decompose_polygons(&diagram, &envelope))
}

fn clusters_from(diagram: &MomentumDiagram, decomposition: &PolygonDecomposition) -> ClusterSet {
    let pts = &diagram.points;
    let clusters = decomposition
        .polygons
        .iter()
        .map(|t| Cluster {
            members: t.members,
            mass: &pts[t.members.last].x - &pts[t.members.first - 1].x,
            velocity: t.slope.clone(),
        })
        .collect();
    ClusterSet { clusters }
}

/// Everything the diagram pipeline computes for one system.
#[derive(Clone, Debug, Serialize)]
pub struct DiagramReport {
    pub diagram: MomentumDiagram,
    pub envelope: Envelope,
    pub polygons: PolygonDecomposition,
    pub clusters: ClusterSet,
}

pub fn analyze(system: &ParticleSystem) -> DiagramReport {
    let diagram = build_momentum_diagram(system);
    let envelope = lower_convex_envelope(&diagram);
    let polygons = decompose_polygons(&diagram, &envelope);
    let clusters = clusters_from(&diagram, &polygons);
    DiagramReport {
        diagram,
        envelope,
        polygons,
        clusters,
    }
}

/// Fixed-point reduction: keep the endpoints and every interior point whose
/// incoming slope is at most its outgoing slope, then repeat on the survivors
/// until nothing more is removed.
pub fn recursive_envelope(points: &[Point2D]) -> Result<Vec<Point2D>> {
    if points.is_empty() {
        return Err(Error::Validation("recursive_envelope needs at least one point".into()));
    }
    if points.windows(2).any(|w| w[0].x >= w[1].x) {
        return Err(Error::Validation("abscissae must be strictly increasing".into()));
    }
    let mut current = points.to_vec();
    loop {
        if current.len() < 3 {
            return Ok(current);
        }
        let mut kept = Vec::with_capacity(current.len());
        kept.push(current[0].clone());
        for w in current.windows(3) {
            let incoming = slope(&w[0], &w[1])?;
            let outgoing = slope(&w[1], &w[2])?;
            if incoming <= outgoing {
                kept.push(w[1].clone());
            }
        }
        kept.push(current[current.len() - 1].clone());
        if kept.len() == current.len() {
            return Ok(kept);
        }
        current = kept;
    }
}

/// True when every interior `P_k` lies strictly above the chord `P_0 P_n`,
/// which is exactly the single-cluster case.
pub fn strictly_above_chord(diagram: &MomentumDiagram) -> bool {
    let pts = &diagram.points;
    let (first, last) = (&pts[0], &pts[pts.len() - 1]);
    pts[1..pts.len() - 1]
        .iter()
        .all(|p| orientation(first, last, p) == Ordering::Greater)
}

#[derive(Clone, Debug)]
pub struct DiagramSvgOptions {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
}

impl Default for DiagramSvgOptions {
    fn default() -> Self {
        DiagramSvgOptions {
            width: 640.0,
            height: 400.0,
            margin: 40.0,
        }
    }
}

/// Renders the diagram polyline, its envelope, and one marker per `P_k`.
pub fn diagram_svg(system: &ParticleSystem, options: &DiagramSvgOptions) -> String {
    let report = analyze(system);
    let pts = &report.diagram.points;
    let xs: Vec<f64> = pts.iter().map(|p| p.x.to_f64()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.y.to_f64()).collect();
    let frame = Frame::fit(&xs, &ys, options.width, options.height, options.margin);

    let mut svg = SvgWriter::new(options.width, options.height);
    svg.axes(&frame, "cumulative mass", "cumulative momentum");
    let f_line: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
    svg.polyline(&frame, &f_line, "#1f4e9c", 1.5, None, "diagram");
    let r_line: Vec<(f64, f64)> = report
        .envelope
        .vertex_indices
        .iter()
        .map(|&k| (xs[k], ys[k]))
        .collect();
    svg.polyline(&frame, &r_line, "#c0392b", 2.0, Some("6 3"), "envelope");
    let contacts = &report.envelope.contact_indices;
    for (k, (&x, &y)) in xs.iter().zip(&ys).enumerate() {
        let fill = if contacts.binary_search(&k).is_ok() {
            "#c0392b"
        } else {
            "#1f4e9c"
        };
        svg.marker(&frame, x, y, 3.5, fill, &format!("P{k}"));
    }
    svg.finish()
}
