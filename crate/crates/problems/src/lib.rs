//! Seeded benchmark problems encoded as QUBOs.
//!
//! Four families are provided: layered random graphs ([`dbg`]), the symmetric
//! travelling salesman ([`tsp`]), satellite sub-constellation assignment
//! ([`sca`]) and maintenance workload scheduling ([`mwp`]). Every generator is
//! a pure function of its parameters and seed. A [`ProblemInstance`] carries
//! the metadata needed to count broken constraints, repair a raw solution and
//! score it.

pub mod dbg;
mod error;
mod instance;
pub mod mwp;
pub mod sca;
pub mod sidecar;
pub mod tsp;
pub mod tsplib;

pub use error::ProblemError;
pub(crate) use error::invalid;
pub use instance::{Evaluation, ProblemInstance, ProblemKind, ProblemMeta};

pub type Result<T, E = ProblemError> = std::result::Result<T, E>;
