//! Combinatorics of moving point sets under geometric ranges.
//!
//! A point set moves along polynomial trajectories of bounded degree; a
//! family of ranges (halfspaces, balls, bounded cones, 1-D intervals) is
//! swept over the motion. The subsets of points captured by some range at
//! some time form a kinetic hypergraph. This crate builds those hypergraphs
//! exactly at desk scale via event timelines, and layers sampling
//! (epsilon-nets and epsilon-approximations), balanced facility selection,
//! a hub-based communication network with interference accounting,
//! approximate range counting, and low-discrepancy coloring on top.
//!
//! All geometry is done in floating point with explicit tolerances; every
//! nontrivial computation has a brute-force oracle next to it in the tests.

pub mod combi;
pub mod counting;
pub mod discrepancy;
pub mod error;
pub mod hypergraph;
pub mod interference;
pub mod linalg;
pub mod motion;
pub mod poly;
pub mod ranges;
pub mod sampling;
pub mod scalar;
pub mod voronoi;

pub use error::Error;
pub use scalar::Real;

/// Concrete double-precision aliases; the generic layer lives in the
/// individual modules.
pub type Poly64 = poly::Polynomial<f64>;
pub type Poly32 = poly::Polynomial<f32>;
pub type Trajectory64 = motion::Trajectory<f64>;
pub type Trajectory32 = motion::Trajectory<f32>;
pub type MovingPoints64 = motion::MovingPointSet<f64>;
pub type TimeInterval64 = motion::TimeInterval<f64>;
pub type Range64 = ranges::Range<f64>;

/// Absolute tolerance for isolating event-polynomial roots.
pub const TAU_ROOT: f64 = 1e-10;
