use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Annealer(#[from] qdecomp_annealer::AnnealerError),

    #[error(transparent)]
    Qubo(#[from] qdecomp_core::QuboError),
}

pub(crate) fn invalid(msg: impl Into<String>) -> SolverError {
    SolverError::InvalidArgument(msg.into())
}
