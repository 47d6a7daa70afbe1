//! Quadratic unconstrained binary optimization (QUBO) algebra.
//!
//! A [`Qubo`] stores the energy function
//!
//! ```text
//! E(q) = offset + sum_i a_i q_i + sum_{i<j} b_ij q_i q_j
//! ```
//!
//! sparsely, with canonical `i < j` coupling keys and no stored zeros. Every
//! decomposition solver in this workspace is built from the handful of
//! operations defined here: energy evaluation, fixing variables (which folds
//! their influence into neighbouring biases and the offset), clamping a
//! sub-problem against a global assignment, and graph-structural queries.

mod error;
mod qubo;
pub mod random;
mod reduced;
mod solution;
mod text;

pub use error::QuboError;
pub use qubo::{Coupling, Qubo, QuboBuilder};
pub use reduced::ReducedQubo;
pub use solution::Solution;

pub type Result<T, E = QuboError> = std::result::Result<T, E>;
