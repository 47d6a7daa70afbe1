//! Line-oriented experiment configs.
//!
//! ```text
//! [problem]
//! kind = dbg
//! number_of_layers = 25, 50
//! connectivity_probability = 0.1
//!
//! [solver]
//! name = fa, qbsolv
//! fa.population_size = 250, 500
//! qbsolv.num_repeats = 1, 50
//!
//! [backend]
//! num_reads = 50
//!
//! [run]
//! seed = 100
//! threshold = 1800
//! repeats = 3
//! ```
//!
//! A comma-separated value is a grid axis. Tuple-valued keys
//! (`allowed_sizes`, `weights`) separate their components with spaces.
//! Solver keys are prefixed with the solver name; the prefix may be dropped
//! when only one solver is named.

use std::path::PathBuf;
use std::str::FromStr;

use qdecomp_annealer::ChainStrength;
use qdecomp_problems::dbg::{DbgParams, OptimizationType};
use qdecomp_problems::mwp::{ConstraintWeights, MwpParams};
use qdecomp_problems::sca::ScaParams;
use qdecomp_problems::ProblemKind;
use qdecomp_solvers::{FreezeWeighting, SolverKind, SolverSpec};

use crate::experiment::{BackendSpec, ExperimentSpec, ProblemSpec, TspCities, TspSpec};
use crate::ConfigError;

const SECTIONS: [&str; 4] = ["problem", "solver", "backend", "run"];

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub values: Vec<String>,
    /// Source line, 0 for overrides.
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Config {
    sections: Vec<(String, Vec<Entry>)>,
}

fn split_values(raw: &str, line: usize) -> Result<Vec<String>, ConfigError> {
    let values: Vec<String> = raw.split(',').map(|v| v.trim().to_string()).collect();
    if values.iter().any(String::is_empty) {
        return Err(ConfigError::new(line, format!("empty value in `{raw}`")));
    }
    Ok(values)
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Config::default();
        let mut current: Option<usize> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::new(line, "unterminated section header"))?
                    .trim();
                if !SECTIONS.contains(&name) {
                    return Err(ConfigError::new(line, format!("unknown section [{name}]")));
                }
                if cfg.sections.iter().any(|(s, _)| s == name) {
                    return Err(ConfigError::new(line, format!("section [{name}] repeated")));
                }
                cfg.sections.push((name.to_string(), Vec::new()));
                current = Some(cfg.sections.len() - 1);
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| ConfigError::new(line, format!("expected `key = value`, got `{content}`")))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(ConfigError::new(line, "missing key"));
            }
            let sec = current.ok_or_else(|| ConfigError::new(line, "entry before any section"))?;
            let entries = &mut cfg.sections[sec].1;
            if entries.iter().any(|e| e.key == key) {
                return Err(ConfigError::new(line, format!("duplicate key `{key}`")));
            }
            entries.push(Entry {
                key: key.to_string(),
                values: split_values(value, line)?,
                line,
            });
        }
        Ok(cfg)
    }

    /// Set or replace `section.key`; `raw` may be a comma-separated list.
    pub fn set(&mut self, section: &str, key: &str, raw: &str) -> Result<(), ConfigError> {
        if !SECTIONS.contains(&section) {
            return Err(ConfigError::new(0, format!("unknown section [{section}]")));
        }
        let values = split_values(raw, 0)?;
        let entries = match self.sections.iter().position(|(s, _)| s == section) {
            Some(i) => &mut self.sections[i].1,
            None => {
                self.sections.push((section.to_string(), Vec::new()));
                &mut self.sections.last_mut().unwrap().1
            }
        };
        match entries.iter_mut().find(|e| e.key == key) {
            Some(e) => {
                e.values = values;
                e.line = 0;
            }
            None => entries.push(Entry {
                key: key.to_string(),
                values,
                line: 0,
            }),
        }
        Ok(())
    }

    /// Apply a `section.key=value` override.
    pub fn set_dotted(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (path, value) = assignment
            .split_once('=')
            .ok_or_else(|| ConfigError::new(0, format!("override `{assignment}` needs `=`")))?;
        let (section, key) = path
            .trim()
            .split_once('.')
            .ok_or_else(|| ConfigError::new(0, format!("override `{path}` needs a section prefix")))?;
        self.set(section, key, value)
    }

    pub fn entries(&self, section: &str) -> &[Entry] {
        self.sections
            .iter()
            .find(|(s, _)| s == section)
            .map_or(&[], |(_, e)| e.as_slice())
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.entries(section).iter().find(|e| e.key == key)
    }

    fn single(&self, section: &str, key: &str) -> Result<Option<(&str, usize)>, ConfigError> {
        match self.get(section, key) {
            None => Ok(None),
            Some(e) if e.values.len() == 1 => Ok(Some((&e.values[0], e.line))),
            Some(e) => Err(ConfigError::new(e.line, format!("`{key}` takes a single value"))),
        }
    }

    fn single_parsed<T: FromStr>(&self, section: &str, key: &str, default: T) -> Result<T, ConfigError> {
        match self.single(section, key)? {
            None => Ok(default),
            Some((v, line)) => v
                .parse()
                .map_err(|_| ConfigError::new(line, format!("bad value `{v}` for `{key}`"))),
        }
    }

    /// Expand the grid into experiments, in grid order, with seeds
    /// `seed + cell index`.
    pub fn experiments(&self) -> Result<Vec<ExperimentSpec>, ConfigError> {
        let run = self.run_settings()?;
        for e in self.entries("run") {
            if !["seed", "threshold", "repeats", "parallelism"].contains(&e.key.as_str()) {
                return Err(ConfigError::new(e.line, format!("unknown run key `{}`", e.key)));
            }
        }

        let (kind, kind_line) = self
            .single("problem", "kind")?
            .ok_or_else(|| ConfigError::new(0, "[problem] needs `kind`"))?;
        let kind = kind.to_string();
        let problem_axes: Vec<&Entry> = self.entries("problem").iter().filter(|e| e.key != "kind").collect();
        let mut problems = Vec::new();
        for combo in cartesian(&problem_axes) {
            problems.push(build_problem(&kind, kind_line, &combo)?);
        }

        let backend_axes: Vec<&Entry> = self.entries("backend").iter().collect();
        let mut backends = Vec::new();
        for combo in cartesian(&backend_axes) {
            backends.push(build_backend(&combo)?);
        }

        let names = self
            .get("solver", "name")
            .ok_or_else(|| ConfigError::new(0, "[solver] needs `name`"))?;
        let kinds: Vec<SolverKind> = names
            .values
            .iter()
            .map(|v| v.parse().map_err(|_| ConfigError::new(names.line, format!("unknown solver `{v}`"))))
            .collect::<Result<_, _>>()?;
        let mut per_solver: Vec<Vec<Entry>> = vec![Vec::new(); kinds.len()];
        for e in self.entries("solver").iter().filter(|e| e.key != "name") {
            let (owner, key) = match e.key.split_once('.') {
                Some((prefix, key)) => {
                    let k: SolverKind = prefix
                        .parse()
                        .map_err(|_| ConfigError::new(e.line, format!("unknown solver prefix `{prefix}`")))?;
                    let idx = kinds
                        .iter()
                        .position(|&x| x == k)
                        .ok_or_else(|| ConfigError::new(e.line, format!("solver `{prefix}` is not in `name`")))?;
                    (idx, key)
                }
                None if kinds.len() == 1 => (0, e.key.as_str()),
                None => {
                    return Err(ConfigError::new(
                        e.line,
                        format!("`{}` needs a solver prefix when several solvers are named", e.key),
                    ))
                }
            };
            per_solver[owner].push(Entry {
                key: key.to_string(),
                ..e.clone()
            });
        }
        let mut solvers = Vec::new();
        for (kind, entries) in kinds.iter().zip(&per_solver) {
            let axes: Vec<&Entry> = entries.iter().collect();
            for combo in cartesian(&axes) {
                solvers.push(build_solver(*kind, &combo)?);
            }
        }

        let mut out = Vec::new();
        for problem in &problems {
            for backend in &backends {
                for solver in &solvers {
                    for _ in 0..run.repeats {
                        let cell = out.len() as u64;
                        out.push(ExperimentSpec {
                            problem: problem.clone(),
                            solver: solver.clone(),
                            backend: backend.clone(),
                            threshold_seconds: run.threshold,
                            seed: run.seed.wrapping_add(cell),
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn run_settings(&self) -> Result<RunSettings, ConfigError> {
        let d = RunSettings::default();
        let s = RunSettings {
            seed: self.single_parsed("run", "seed", d.seed)?,
            threshold: self.single_parsed("run", "threshold", d.threshold)?,
            repeats: self.single_parsed("run", "repeats", d.repeats)?,
            parallelism: self.single_parsed("run", "parallelism", d.parallelism)?,
        };
        let line = |k| self.get("run", k).map_or(0, |e| e.line);
        if !(s.threshold > 0.0 && s.threshold.is_finite()) {
            return Err(ConfigError::new(line("threshold"), "threshold must be positive"));
        }
        if s.parallelism == 0 {
            return Err(ConfigError::new(line("parallelism"), "parallelism must be at least 1"));
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub seed: u64,
    /// Seconds per experiment.
    pub threshold: f64,
    pub repeats: usize,
    pub parallelism: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            seed: 0,
            threshold: 1800.0,
            repeats: 1,
            parallelism: 1,
        }
    }
}

/// A chosen value for one key, with its source line.
type Pick<'a> = (&'a str, &'a str, usize);

/// Every combination of axis values, first axis outermost.
fn cartesian<'a>(axes: &[&'a Entry]) -> Vec<Vec<Pick<'a>>> {
    let mut out: Vec<Vec<Pick<'a>>> = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push((axis.key.as_str(), v.as_str(), axis.line));
                    next
                })
            })
            .collect();
    }
    out
}

fn parse<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError::new(line, format!("bad value `{value}` for `{key}`")))
}

fn auto<T: FromStr>(key: &str, value: &str, line: usize) -> Result<Option<T>, ConfigError> {
    if value.eq_ignore_ascii_case("auto") {
        Ok(None)
    } else {
        parse(key, value, line).map(Some)
    }
}

fn tuple<T: FromStr>(key: &str, value: &str, line: usize) -> Result<Vec<T>, ConfigError> {
    value.split_whitespace().map(|v| parse(key, v, line)).collect()
}

fn unknown(key: &str, line: usize, what: &str) -> ConfigError {
    ConfigError::new(line, format!("unknown {what} key `{key}`"))
}

fn build_problem(kind: &str, kind_line: usize, picks: &[Pick]) -> Result<ProblemSpec, ConfigError> {
    if kind.eq_ignore_ascii_case("file") {
        let (mut qubo, mut meta) = (None, None);
        for &(k, v, line) in picks {
            match k {
                "qubo" => qubo = Some(PathBuf::from(v)),
                "meta" => meta = Some(PathBuf::from(v)),
                _ => return Err(unknown(k, line, "file problem")),
            }
        }
        return match (qubo, meta) {
            (Some(qubo), Some(meta)) => Ok(ProblemSpec::File { qubo, meta }),
            _ => Err(ConfigError::new(kind_line, "file problems need `qubo` and `meta`")),
        };
    }
    let kind: ProblemKind = kind
        .parse()
        .map_err(|_| ConfigError::new(kind_line, format!("unknown problem kind `{kind}`")))?;
    Ok(match kind {
        ProblemKind::Dbg => {
            let mut p = DbgParams::default();
            for &(k, v, line) in picks {
                match k {
                    "number_of_layers" => p.number_of_layers = parse(k, v, line)?,
                    "nodes_per_layer" => p.nodes_per_layer = parse(k, v, line)?,
                    "max_connectivity_range_layer" => p.max_connectivity_range_layer = parse(k, v, line)?,
                    "connectivity_probability" => p.connectivity_probability = parse(k, v, line)?,
                    "average_node_value" => p.average_node_value = parse(k, v, line)?,
                    "optimization_type" => {
                        p.optimization_type = match v.to_ascii_lowercase().as_str() {
                            "constant" => OptimizationType::Constant,
                            "random" => OptimizationType::Random,
                            _ => return Err(ConfigError::new(line, format!("bad optimization_type `{v}`"))),
                        }
                    }
                    _ => return Err(unknown(k, line, "DBG")),
                }
            }
            ProblemSpec::Dbg(p)
        }
        ProblemKind::Tsp => {
            let mut cities = TspCities::Random(5);
            let (mut a, mut b) = (None, None);
            for &(k, v, line) in picks {
                match k {
                    "cities" => cities = TspCities::Random(parse(k, v, line)?),
                    "tsplib" => cities = TspCities::Tsplib(PathBuf::from(v)),
                    "penalty_a" => a = auto(k, v, line)?,
                    "penalty_b" => b = auto(k, v, line)?,
                    _ => return Err(unknown(k, line, "TSP")),
                }
            }
            let penalties = match (a, b) {
                (None, None) => None,
                (Some(a), Some(b)) => Some((a, b)),
                _ => return Err(ConfigError::new(kind_line, "set both penalty_a and penalty_b, or neither")),
            };
            ProblemSpec::Tsp(TspSpec { cities, penalties })
        }
        ProblemKind::Sca => {
            let mut p = ScaParams::default();
            for &(k, v, line) in picks {
                match k {
                    "n_satellites" => p.n_satellites = parse(k, v, line)?,
                    "allowed_sizes" => p.allowed_sizes = tuple(k, v, line)?,
                    "k" => p.k = parse(k, v, line)?,
                    "threshold_percentile" => p.threshold_percentile = parse(k, v, line)?,
                    _ => return Err(unknown(k, line, "SCA")),
                }
            }
            ProblemSpec::Sca(p)
        }
        ProblemKind::Mwp => {
            let mut p = MwpParams::default();
            let mut weights = None;
            for &(k, v, line) in picks {
                match k {
                    "n_repairs" => p.n_repairs = parse(k, v, line)?,
                    "n_facilities" => p.n_facilities = parse(k, v, line)?,
                    "weeks" => p.weeks = parse(k, v, line)?,
                    "n_locations" => p.n_locations = parse(k, v, line)?,
                    "n_repair_types" => p.n_repair_types = parse(k, v, line)?,
                    "weights" if v.eq_ignore_ascii_case("auto") => weights = None,
                    "weights" => match tuple::<f64>(k, v, line)?.as_slice() {
                        &[once, capacity, cost, value] => {
                            weights = Some(ConstraintWeights {
                                once,
                                capacity,
                                cost,
                                value,
                            })
                        }
                        _ => return Err(ConfigError::new(line, "weights needs four numbers")),
                    },
                    _ => return Err(unknown(k, line, "MWP")),
                }
            }
            ProblemSpec::Mwp { params: p, weights }
        }
    })
}

fn build_backend(picks: &[Pick]) -> Result<BackendSpec, ConfigError> {
    let mut s = BackendSpec::default();
    let b = &mut s.budget;
    for &(k, v, line) in picks {
        match k {
            "chimera_m" => s.chimera_m = parse(k, v, line)?,
            "max_clique_size" => b.max_clique_size = parse(k, v, line)?,
            "num_reads" => b.num_reads = parse(k, v, line)?,
            "anneal_sweeps" => b.anneal_sweeps = parse(k, v, line)?,
            "chain_strength" => {
                b.chain_strength = match auto(k, v, line)? {
                    None => ChainStrength::Auto,
                    Some(x) => ChainStrength::Fixed(x),
                }
            }
            "embed_effort" => b.embed_effort = parse(k, v, line)?,
            "polish" => b.polish = parse(k, v, line)?,
            "rng_seed" => b.rng_seed = parse(k, v, line)?,
            _ => return Err(unknown(k, line, "backend")),
        }
    }
    // a 4m+1 clique is the largest the grid holds
    if s.chimera_m == 0 || s.budget.max_clique_size > 4 * s.chimera_m + 1 {
        let line = picks.iter().map(|p| p.2).max().unwrap_or(0);
        return Err(ConfigError::new(
            line,
            format!(
                "max_clique_size {} does not fit chimera_m {}",
                s.budget.max_clique_size, s.chimera_m
            ),
        ));
    }
    Ok(s)
}

fn build_solver(kind: SolverKind, picks: &[Pick]) -> Result<SolverSpec, ConfigError> {
    let mut spec = SolverSpec::default_for(kind);
    for &(k, v, line) in picks {
        match &mut spec {
            SolverSpec::Pcd(p) => match k {
                "layout_iterations" => p.layout_iterations = parse(k, v, line)?,
                "embed_effort" => p.embed_effort = auto(k, v, line)?,
                _ => return Err(unknown(k, line, "pcd")),
            },
            SolverSpec::Fa(p) => match k {
                "population_size" => p.population_size = parse(k, v, line)?,
                "num_generations" => p.num_generations = parse(k, v, line)?,
                "crossover_rate" => p.crossover_rate = parse(k, v, line)?,
                "mutation_rate" => p.mutation_rate = auto(k, v, line)?,
                "freeze_batch" => p.freeze_batch = parse(k, v, line)?,
                "weighting" => {
                    p.weighting = match v.to_ascii_lowercase().as_str() {
                        "normalize" => FreezeWeighting::Normalize,
                        "multiply" => FreezeWeighting::Multiply,
                        _ => return Err(ConfigError::new(line, format!("bad weighting `{v}`"))),
                    }
                }
                _ => return Err(unknown(k, line, "fa")),
            },
            SolverSpec::Qbsolv(p) => match k {
                "num_repeats" => p.num_repeats = parse(k, v, line)?,
                "subqubo_size" => p.subqubo_size = auto(k, v, line)?,
                "tabu_tenure" => p.tabu_tenure = parse(k, v, line)?,
                "tabu_iterations" => p.tabu_iterations = auto(k, v, line)?,
                _ => return Err(unknown(k, line, "qbsolv")),
            },
            SolverSpec::Random | SolverSpec::Ich => {
                return Err(ConfigError::new(line, format!("{} takes no parameters (`{k}`)", kind.name())))
            }
        }
    }
    Ok(spec)
}
