use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Duration;

use qdecomp_annealer::{AnnealerBackend, ChainStrength, Chimera, SubSolverBudget};
use qdecomp_core::Qubo;
use qdecomp_problems::dbg::{gen_dbg, DbgParams, OptimizationType};
use qdecomp_problems::mwp::{gen_mwp, ConstraintWeights, MwpParams};
use qdecomp_problems::sca::{gen_sca, ScaParams};
use qdecomp_problems::sidecar::from_sidecar;
use qdecomp_problems::tsp::{gen_tsp_random, tsp_to_qubo, TspMeta};
use qdecomp_problems::tsplib::load_tsplib;
use qdecomp_problems::ProblemInstance;
use qdecomp_solvers::{solve, FreezeWeighting, SolveBudget, SolverSpec};

use crate::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum TspCities {
    /// `n` uniformly random cities, integer-rounded Euclidean distances.
    Random(usize),
    Tsplib(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TspSpec {
    pub cities: TspCities,
    /// `None` uses the default multipliers.
    pub penalties: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    Dbg(DbgParams),
    Tsp(TspSpec),
    Sca(ScaParams),
    Mwp {
        params: MwpParams,
        weights: Option<ConstraintWeights>,
    },
    /// A QUBO text file plus its metadata sidecar, as written by `generate`.
    File { qubo: PathBuf, meta: PathBuf },
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

impl ProblemSpec {
    pub fn label(&self) -> &'static str {
        match self {
            ProblemSpec::Dbg(_) => "dbg",
            ProblemSpec::Tsp(_) => "tsp",
            ProblemSpec::Sca(_) => "sca",
            ProblemSpec::Mwp { .. } => "mwp",
            ProblemSpec::File { .. } => "file",
        }
    }

    pub fn generate(&self, seed: u64) -> Result<ProblemInstance> {
        Ok(match self {
            ProblemSpec::Dbg(p) => gen_dbg(p, seed)?,
            ProblemSpec::Tsp(t) => {
                let distances = match &t.cities {
                    TspCities::Random(n) => gen_tsp_random(*n, seed)?,
                    TspCities::Tsplib(path) => load_tsplib(&read(path)?)?,
                };
                let meta = match t.penalties {
                    Some((a, b)) => TspMeta::new(distances, a, b)?,
                    None => TspMeta::with_default_penalties(distances)?,
                };
                tsp_to_qubo(meta, seed)?
            }
            ProblemSpec::Sca(p) => gen_sca(p, seed)?,
            ProblemSpec::Mwp { params, weights } => gen_mwp(params, weights.clone(), seed)?,
            ProblemSpec::File { qubo, meta } => {
                let q = Qubo::from_text(&read(qubo)?)?;
                from_sidecar(q, &read(meta)?)?
            }
        })
    }

    /// `key=value` pairs joined with `;`, every parameter spelled out.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        match self {
            ProblemSpec::Dbg(p) => {
                let ty = match p.optimization_type {
                    OptimizationType::Constant => "constant",
                    OptimizationType::Random => "random",
                };
                write!(
                    s,
                    "number_of_layers={};nodes_per_layer={};max_connectivity_range_layer={};\
                     connectivity_probability={};average_node_value={};optimization_type={ty}",
                    p.number_of_layers,
                    p.nodes_per_layer,
                    p.max_connectivity_range_layer,
                    p.connectivity_probability,
                    p.average_node_value,
                )
            }
            ProblemSpec::Tsp(t) => {
                match &t.cities {
                    TspCities::Random(n) => write!(s, "cities={n}"),
                    TspCities::Tsplib(p) => write!(s, "tsplib={}", p.display()),
                }
                .unwrap();
                match t.penalties {
                    Some((a, b)) => write!(s, ";penalty_a={a};penalty_b={b}"),
                    None => write!(s, ";penalty_a=auto;penalty_b=auto"),
                }
            }
            ProblemSpec::Sca(p) => {
                let sizes: Vec<String> = p.allowed_sizes.iter().map(ToString::to_string).collect();
                write!(
                    s,
                    "n_satellites={};allowed_sizes={};k={};threshold_percentile={}",
                    p.n_satellites,
                    sizes.join(" "),
                    p.k,
                    p.threshold_percentile
                )
            }
            ProblemSpec::Mwp { params: p, weights } => {
                write!(
                    s,
                    "n_repairs={};n_facilities={};weeks={};n_locations={};n_repair_types={}",
                    p.n_repairs, p.n_facilities, p.weeks, p.n_locations, p.n_repair_types
                )
                .unwrap();
                match weights {
                    Some(w) => write!(s, ";weights={} {} {} {}", w.once, w.capacity, w.cost, w.value),
                    None => write!(s, ";weights=auto"),
                }
            }
            ProblemSpec::File { qubo, meta } => {
                write!(s, "qubo={};meta={}", qubo.display(), meta.display())
            }
        }
        .unwrap();
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackendSpec {
    /// Chimera grid size `m`.
    pub chimera_m: usize,
    pub budget: SubSolverBudget,
}

impl Default for BackendSpec {
    fn default() -> Self {
        Self {
            chimera_m: 16,
            budget: SubSolverBudget::default(),
        }
    }
}

impl BackendSpec {
    pub fn build(&self) -> Result<AnnealerBackend> {
        Ok(AnnealerBackend::new(Chimera::new(self.chimera_m), self.budget.clone())?)
    }

    pub fn echo(&self) -> String {
        let b = &self.budget;
        let chain = match b.chain_strength {
            ChainStrength::Auto => "auto".to_string(),
            ChainStrength::Fixed(v) => v.to_string(),
        };
        format!(
            "chimera_m={};max_clique_size={};num_reads={};anneal_sweeps={};chain_strength={chain};\
             embed_effort={};polish={};rng_seed={}",
            self.chimera_m,
            b.max_clique_size,
            b.num_reads,
            b.anneal_sweeps,
            b.embed_effort,
            b.polish,
            b.rng_seed
        )
    }
}

pub fn solver_echo(spec: &SolverSpec) -> String {
    let auto = |v: Option<usize>| v.map_or("auto".to_string(), |v| v.to_string());
    match spec {
        SolverSpec::Random | SolverSpec::Ich => String::new(),
        SolverSpec::Pcd(p) => format!(
            "layout_iterations={};embed_effort={}",
            p.layout_iterations,
            auto(p.embed_effort)
        ),
        SolverSpec::Fa(p) => format!(
            "population_size={};num_generations={};crossover_rate={};mutation_rate={};\
             freeze_batch={};weighting={}",
            p.population_size,
            p.num_generations,
            p.crossover_rate,
            p.mutation_rate.map_or("auto".to_string(), |m| m.to_string()),
            p.freeze_batch,
            match p.weighting {
                FreezeWeighting::Normalize => "normalize",
                FreezeWeighting::Multiply => "multiply",
            }
        ),
        SolverSpec::Qbsolv(p) => format!(
            "num_repeats={};subqubo_size={};tabu_tenure={};tabu_iterations={}",
            p.num_repeats,
            auto(p.subqubo_size),
            p.tabu_tenure,
            auto(p.tabu_iterations)
        ),
    }
}

/// One experiment: a problem instance, a solver, a backend, a time threshold
/// and a seed shared by the generator and the solver.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub problem: ProblemSpec,
    pub solver: SolverSpec,
    pub backend: BackendSpec,
    pub threshold_seconds: f64,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn new(problem: ProblemSpec, solver: SolverSpec, seed: u64) -> Self {
        Self {
            problem,
            solver,
            backend: BackendSpec::default(),
            threshold_seconds: 1800.0,
            seed,
        }
    }
}

/// Outcome columns of a successful run. Times are seconds, truncated to
/// whole milliseconds.
#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub graph_size: usize,
    /// `None` below two variables.
    pub edge_density: Option<f64>,
    pub total_time: f64,
    pub classical_time: f64,
    pub embedding_time: f64,
    pub quantum_time: f64,
    pub solution_energy: f64,
    /// `None` for MWP, which has no broken-constraint count.
    pub broken_constraints: Option<usize>,
    pub fixed_quality: f64,
    pub timed_out: bool,
    pub subproblems: usize,
}

impl Metrics {
    /// The same metrics with every wall-clock field zeroed.
    pub fn without_timing(&self) -> Metrics {
        Metrics {
            total_time: 0.0,
            classical_time: 0.0,
            embedding_time: 0.0,
            quantum_time: 0.0,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    /// Position in the sweep grid (0 for a single run).
    pub cell: usize,
    pub problem: String,
    pub problem_params: String,
    pub solver: String,
    pub solver_params: String,
    pub backend_params: String,
    pub threshold_seconds: f64,
    pub seed: u64,
    /// Metrics, or the error that stopped the run.
    pub outcome: std::result::Result<Metrics, String>,
}

impl ExperimentRecord {
    pub fn metrics(&self) -> Option<&Metrics> {
        self.outcome.as_ref().ok()
    }

    /// The record with wall-clock fields zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> ExperimentRecord {
        ExperimentRecord {
            outcome: self.outcome.as_ref().map(Metrics::without_timing).map_err(Clone::clone),
            ..self.clone()
        }
    }
}

pub(crate) fn millis(d: Duration) -> f64 {
    d.as_millis() as f64 / 1000.0
}

fn record_shell(spec: &ExperimentSpec, cell: usize) -> ExperimentRecord {
    ExperimentRecord {
        cell,
        problem: spec.problem.label().to_string(),
        problem_params: spec.problem.echo(),
        solver: spec.solver.kind().name().to_string(),
        solver_params: solver_echo(&spec.solver),
        backend_params: spec.backend.echo(),
        threshold_seconds: spec.threshold_seconds,
        seed: spec.seed,
        outcome: Err(String::new()),
    }
}

fn measure(spec: &ExperimentSpec, record: &mut ExperimentRecord) -> Result<Metrics> {
    let inst = spec.problem.generate(spec.seed)?;
    record.problem = inst.kind().name().to_string();
    let backend = spec.backend.build()?;
    let budget = SolveBudget::seconds(spec.threshold_seconds);
    let report = solve(&spec.solver, &inst.qubo, &backend, budget, spec.seed)?;
    let eval = inst.evaluate(&report.solution.bits)?;
    let n = inst.num_vars();
    Ok(Metrics {
        graph_size: n,
        edge_density: (n >= 2).then(|| inst.qubo.edge_density()).transpose()?,
        total_time: millis(report.total_time),
        classical_time: millis(report.classical_time),
        embedding_time: millis(report.embedding_time),
        quantum_time: millis(report.quantum_time),
        solution_energy: report.solution.energy,
        broken_constraints: eval.broken,
        fixed_quality: eval.quality,
        timed_out: report.timed_out,
        subproblems: report.subproblems_solved,
    })
}

/// Generate the instance, solve it, and score the repaired solution.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentRecord> {
    if !(spec.threshold_seconds > 0.0 && spec.threshold_seconds.is_finite()) {
        return Err(crate::ConfigError::new(0, format!("threshold {} must be positive", spec.threshold_seconds)).into());
    }
    let mut record = record_shell(spec, 0);
    record.outcome = Ok(measure(spec, &mut record)?);
    Ok(record)
}

/// Like [`run_experiment`], but a failure becomes the record's outcome.
pub(crate) fn run_cell(spec: &ExperimentSpec, cell: usize) -> ExperimentRecord {
    let mut record = record_shell(spec, cell);
    record.outcome = match run_experiment(spec) {
        Ok(r) => {
            record.problem = r.problem;
            r.outcome
        }
        Err(e) => Err(e.to_string()),
    };
    record
}
