//! Experiment runner for the decomposition solvers.
//!
//! An experiment pairs a generated problem instance with a solver, a simulated
//! backend and a wall-clock threshold. [`Config`] expands a `key = value`
//! file into a grid of [`ExperimentSpec`]s, [`run_sweep`] runs them, and the
//! records go to a versioned CSV that [`summarize`] aggregates per
//! (problem, solver).

mod config;
mod error;
mod experiment;
mod results;
mod summary;
mod sweep;

pub use config::{Config, Entry, RunSettings};
pub use error::{ConfigError, HarnessError};
pub use experiment::{
    run_experiment, solver_echo, BackendSpec, ExperimentRecord, ExperimentSpec, Metrics, ProblemSpec,
    TspCities, TspSpec,
};
pub use results::{read_records, records_to_string, write_records, COLUMNS, SCHEMA_VERSION};
pub use summary::{summarize, write_summary, SummaryRow};
pub use sweep::run_sweep;

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
