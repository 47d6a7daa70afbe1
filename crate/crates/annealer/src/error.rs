use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnnealerError {
    #[error("capacity exceeded: {requested} variables requested, limit is {capacity}")]
    CapacityExceeded { requested: usize, capacity: usize },

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Qubo(#[from] qdecomp_core::QuboError),
}
