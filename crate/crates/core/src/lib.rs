//! Toolkit for positive non-clashing teaching maps over families of balls in
//! graphs: verification, exact solving, kernelization by vertex integrity, and
//! generators for two hardness-reduction instance families.
//!
//! The central objects are [`graph::Graph`], [`balls::BallFamily`] and
//! [`teaching::TeachingMap`]. A teaching map assigns each ball a teaching set
//! (a subset of the ball); it is *non-clashing* when every pair of distinct
//! balls has a teaching vertex outside their intersection. The toolkit
//! computes maps of minimum dimension (largest teaching-set size), either
//! directly ([`solver`]) or through the vertex-integrity reduction pipeline
//! ([`vi`]).

pub mod balls;
pub mod graph;
pub mod reductions;
pub mod solver;
pub mod teaching;
pub mod vi;

pub use balls::{Ball, BallFamily};
pub use graph::Graph;
pub use teaching::TeachingMap;
