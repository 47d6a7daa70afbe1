use std::time::{Duration, Instant};

use qdecomp_annealer::SubSolveOutcome;
use qdecomp_core::Solution;

/// Wall-clock allowance for one solve. Checked between sub-problems; a
/// running sub-solve is never interrupted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveBudget {
    pub time_limit: Duration,
}

impl Default for SolveBudget {
    fn default() -> Self {
        Self {
            time_limit: Duration::from_secs(1800),
        }
    }
}

impl SolveBudget {
    pub fn seconds(secs: f64) -> Self {
        Self {
            time_limit: Duration::from_secs_f64(secs),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solver: String,
    /// Parameter echo, in a fixed order per solver.
    pub params: Vec<(String, String)>,
    pub solution: Solution,
    pub classical_time: Duration,
    pub embedding_time: Duration,
    pub quantum_time: Duration,
    pub total_time: Duration,
    pub subproblems_solved: usize,
    /// Variables handed to the backend, summed over sub-problems.
    pub subproblem_vars: usize,
    pub timed_out: bool,
}

impl SolveReport {
    /// Everything except the wall-clock fields, for reproducibility checks.
    pub fn without_timing(&self) -> (&str, &[(String, String)], &Solution, usize, usize) {
        (
            &self.solver,
            &self.params,
            &self.solution,
            self.subproblems_solved,
            self.subproblem_vars,
        )
    }
}

/// Accumulates the embedding/annealing split while a solver runs.
#[derive(Debug)]
pub(crate) struct Stopwatch {
    start: Instant,
    limit: Duration,
    embedding: Duration,
    quantum: Duration,
    subproblems: usize,
    subproblem_vars: usize,
}

impl Stopwatch {
    pub fn start(budget: SolveBudget) -> Self {
        Self {
            start: Instant::now(),
            limit: budget.time_limit,
            embedding: Duration::ZERO,
            quantum: Duration::ZERO,
            subproblems: 0,
            subproblem_vars: 0,
        }
    }

    pub fn expired(&self) -> bool {
        self.start.elapsed() >= self.limit
    }

    pub fn add_embedding(&mut self, d: Duration) {
        self.embedding += d;
    }

    pub fn record(&mut self, outcome: &SubSolveOutcome) {
        self.embedding += outcome.embedding_time;
        self.quantum += outcome.quantum_time;
        self.subproblems += 1;
        self.subproblem_vars += outcome.solution.bits.len();
    }

    pub fn finish(
        self,
        solver: &str,
        params: Vec<(String, String)>,
        solution: Solution,
        timed_out: bool,
    ) -> SolveReport {
        let total = self.start.elapsed().max(self.embedding + self.quantum);
        SolveReport {
            solver: solver.to_string(),
            params,
            solution,
            classical_time: total - self.embedding - self.quantum,
            embedding_time: self.embedding,
            quantum_time: self.quantum,
            total_time: total,
            subproblems_solved: self.subproblems,
            subproblem_vars: self.subproblem_vars,
            timed_out,
        }
    }
}

pub(crate) fn param(name: &str, value: impl ToString) -> (String, String) {
    (name.to_string(), value.to_string())
}
