use thiserror::Error;

/// A malformed config file or override, with the offending line (0 for
/// command-line overrides).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("config line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("problem: {0}")]
    Problem(#[from] qdecomp_problems::ProblemError),

    #[error("solver: {0}")]
    Solver(#[from] qdecomp_solvers::SolverError),

    #[error("backend: {0}")]
    Annealer(#[from] qdecomp_annealer::AnnealerError),

    #[error("qubo: {0}")]
    Qubo(#[from] qdecomp_core::QuboError),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed results file: {0}")]
    Format(String),
}
