use std::fmt;
use std::str::FromStr;

use qdecomp_annealer::AnnealerBackend;
use qdecomp_core::Qubo;

use crate::error::invalid;
use crate::{
    solve_fa, solve_ich, solve_pcd, solve_qb, solve_random, FaParams, PcdParams, QbParams, Result,
    SolveBudget, SolveReport, SolverError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolverKind {
    Random,
    Pcd,
    Fa,
    Qbsolv,
    Ich,
}

impl SolverKind {
    pub const ALL: [SolverKind; 5] = [
        SolverKind::Random,
        SolverKind::Pcd,
        SolverKind::Fa,
        SolverKind::Qbsolv,
        SolverKind::Ich,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Random => "random",
            SolverKind::Pcd => "pcd",
            SolverKind::Fa => "fa",
            SolverKind::Qbsolv => "qbsolv",
            SolverKind::Ich => "ich",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| invalid(format!("unknown solver `{s}`")))
    }
}

/// A solver together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum SolverSpec {
    Random,
    Pcd(PcdParams),
    Fa(FaParams),
    Qbsolv(QbParams),
    Ich,
}

impl SolverSpec {
    pub fn kind(&self) -> SolverKind {
        match self {
            SolverSpec::Random => SolverKind::Random,
            SolverSpec::Pcd(_) => SolverKind::Pcd,
            SolverSpec::Fa(_) => SolverKind::Fa,
            SolverSpec::Qbsolv(_) => SolverKind::Qbsolv,
            SolverSpec::Ich => SolverKind::Ich,
        }
    }

    /// Default parameters for `kind`.
    pub fn default_for(kind: SolverKind) -> Self {
        match kind {
            SolverKind::Random => SolverSpec::Random,
            SolverKind::Pcd => SolverSpec::Pcd(PcdParams::default()),
            SolverKind::Fa => SolverSpec::Fa(FaParams::default()),
            SolverKind::Qbsolv => SolverSpec::Qbsolv(QbParams::default()),
            SolverKind::Ich => SolverSpec::Ich,
        }
    }
}

pub fn solve(
    spec: &SolverSpec,
    qubo: &Qubo,
    backend: &AnnealerBackend,
    budget: SolveBudget,
    seed: u64,
) -> Result<SolveReport> {
    match spec {
        SolverSpec::Random => Ok(solve_random(qubo, seed)),
        SolverSpec::Pcd(p) => solve_pcd(qubo, backend, budget, p, seed),
        SolverSpec::Fa(p) => solve_fa(qubo, backend, budget, p, seed),
        SolverSpec::Qbsolv(p) => solve_qb(qubo, backend, budget, p, seed),
        SolverSpec::Ich => solve_ich(qubo, backend, budget, seed),
    }
}
