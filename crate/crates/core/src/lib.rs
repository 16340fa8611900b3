//! Exact computations around rainbow matchings and Latin-square transversals:
//! independence and matching complexes, their homological connectivity, the
//! CON/NON edge game with an auditable strategy engine, and exact solvers for
//! independent systems of representatives, rainbow matchings, and partial
//! transversals — together with a verification harness that turns the bounds
//! relating all of these into runnable checks.

pub mod bitset;
pub mod complex;
pub mod error;
pub mod graph;
pub mod homology;

pub use bitset::VertexSet;
pub use error::{Error, Result};
pub use graph::{derangements, factorial, Edge, EdgeId, Graph};
pub use homology::{Eta, EtaBound};
