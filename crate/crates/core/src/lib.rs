//! Exact computations on transportation polytopes.
//!
//! The crate enumerates lattice points of `T_rc` (nonnegative integer
//! matrices with fixed row and column sums), slices the polytope into
//! width-one cells, builds pulling triangulations and checks the toric
//! ideal side: fibers, Markov moves and Stanley-Reisner initial ideals.
//! All arithmetic is exact.

pub mod error;
pub mod exact;
pub mod fixtures;
pub mod pipeline;
pub mod polytope;
pub mod report;
pub mod smoothness;
pub mod subdivision;
pub mod toric;
pub mod triangulation;
pub mod verify;

pub use error::{Error, Result};
pub use polytope::{enumerate_lattice_points, BoxConstraints, LatticeMatrix, Margins, PointConfiguration};
