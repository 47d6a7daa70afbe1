//! Decomposition solvers for QUBOs larger than the annealing backend.
//!
//! Each solver takes an arbitrary [`Qubo`](qdecomp_core::Qubo), an
//! [`AnnealerBackend`](qdecomp_annealer::AnnealerBackend) that only accepts
//! sub-problems up to its capacity, and a wall-clock [`SolveBudget`]. It
//! returns a [`SolveReport`] whose time is split into classical, embedding and
//! annealing components.
//!
//! | solver | strategy |
//! |---|---|
//! | [`solve_random`] | uniform random bits |
//! | [`solve_pcd`] | spring layout, slice along the principal axis, greedy stitch |
//! | [`solve_fa`] | genetic algorithm, freeze consensus variables, anneal the rest |
//! | [`solve_qb`] | impact-ranked clamped sub-problems plus tabu search |
//! | [`solve_ich`] | highest-degree node and its neighbours, one halo at a time |

mod error;
mod fa;
mod ich;
mod layout;
mod pcd;
mod qbsolv;
mod random;
mod report;
mod spec;
mod tabu;

pub use error::SolverError;
pub use fa::{freeze_scores, solve_fa, FaParams, FreezeWeighting};
pub use ich::solve_ich;
pub use layout::{pca_primary_axis, spearman, spring_layout, LayoutCoords};
pub use pcd::{solve_pcd, PcdParams};
pub use qbsolv::{solve_qb, QbParams};
pub use random::solve_random;
pub use report::{SolveBudget, SolveReport};
pub use spec::{solve, SolverKind, SolverSpec};
pub use tabu::{tabu_search, TabuOutcome};

pub type Result<T, E = SolverError> = std::result::Result<T, E>;

/// Independent seed for sub-stream `stream` of a run seeded with `seed`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Bit `i` is on exactly when its bias is negative.
pub(crate) fn by_bias_sign(biases: impl Iterator<Item = f64>) -> Vec<bool> {
    biases.map(|a| a < 0.0).collect()
}
