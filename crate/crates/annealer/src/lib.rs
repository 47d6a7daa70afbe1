//! A stand-in for a size-limited quantum annealer.
//!
//! The hardware is a Chimera graph: an `m x m` grid of complete bipartite
//! `K_{4,4}` cells. Logical problems reach it through a minor embedding
//! (chains of physical qubits per logical variable), are sampled with
//! single-flip simulated annealing on the hardware graph, and come back through
//! majority-vote unembedding. [`AnnealerBackend::subsolve`] wraps the whole
//! round trip behind one call and reports how long was spent on embedding
//! versus sampling.

mod backend;
mod chimera;
mod embedding;
mod error;
mod exact;
mod hardware;
mod heuristic;
mod sampler;

pub use backend::{AnnealerBackend, ChainStrength, SubSolveOutcome, SubSolverBudget};
pub use chimera::{Chimera, QubitCoord};
pub use embedding::{clique_embedding, Embedding};
pub use error::AnnealerError;
pub use exact::{exact_solve, EXACT_MAX_VARS};
pub use hardware::{auto_chain_strength, broken_chains, embed_qubo, unembed, HardwareQubo};
pub use heuristic::{heuristic_embed, logical_graph, EmbedFailure};
pub use sampler::{anneal, local_descent, sample, AnnealSchedule, Read};

pub type Result<T, E = AnnealerError> = std::result::Result<T, E>;
