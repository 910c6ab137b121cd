//! Asymptotic cluster structure of one-dimensional sticky-particle systems.
//!
//! * [`diagram`] predicts the final clusters from the lower convex envelope of
//!   the cumulative momentum diagram.
//! * [`simulator`] runs the collisions exactly, event by event, as an
//!   independent check.
//! * [`combinatorics`] solves the unit-mass ±1-velocity case in closed form
//!   via lattice-path determinants, alongside enumeration oracles.
//! * [`montecarlo`] estimates cluster-count distributions for larger systems.
//!
//! All quantities that decide a cluster boundary are exact rationals.

pub mod combinatorics;
pub mod diagram;
pub mod error;
pub mod montecarlo;
pub mod numerics;
pub mod simulator;
mod svg;
pub mod system;

pub use diagram::{
    analyze, build_momentum_diagram, decompose_polygons, diagram_svg, lower_convex_envelope,
    predict_clusters, recursive_envelope, DiagramReport, DiagramSvgOptions, Envelope,
    MomentumDiagram, Polygon, PolygonDecomposition,
};
pub use error::{Error, Result};
pub use numerics::{binom_plus, rational_parse, slope, Point2D, Rational};
pub use simulator::{
    position_at, simulate, trajectories_svg, CollisionEvent, SimClusterState, SimulationResult,
    TrajectorySvgOptions,
};
pub use system::{Cluster, ClusterSet, MemberRange, Particle, ParticleSystem};
