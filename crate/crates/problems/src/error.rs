use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid penalty: {0}")]
    InvalidPenalty(String),

    #[error("infeasible instance: {0}")]
    InfeasibleInstance(String),

    #[error("unsupported format: field {field}")]
    UnsupportedFormat { field: String },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Qubo(#[from] qdecomp_core::QuboError),
}

pub(crate) fn invalid(msg: impl Into<String>) -> ProblemError {
    ProblemError::InvalidArgument(msg.into())
}
