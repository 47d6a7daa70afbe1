use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuboError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph has no variables")]
    EmptyGraph,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl QuboError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        QuboError::InvalidArgument(msg.into())
    }
}
