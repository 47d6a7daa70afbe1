use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qdecomp_harness::{
    read_records, run_sweep, summarize, write_records, write_summary, Config, ConfigError, HarnessError,
};
use qdecomp_problems::sidecar::to_sidecar;

/// Run QUBO decomposition experiments against a simulated annealer.
#[derive(Parser)]
#[command(name = "qdecomp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the instance of every grid cell as `<cell>.qubo` plus `<cell>.meta`.
    Generate {
        #[command(flatten)]
        exp: ExperimentArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run a single experiment and print its CSV record.
    Solve {
        #[command(flatten)]
        exp: ExperimentArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every cell of the grid.
    Sweep {
        #[command(flatten)]
        exp: ExperimentArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "QDECOMP_PARALLELISM")]
        parallelism: Option<usize>,
    },
    /// Aggregate a results CSV per (problem, solver).
    Summarize {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// Config file with [problem], [solver], [backend] and [run] sections.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Problem kind: dbg, tsp, sca, mwp or file.
    #[arg(long)]
    problem: Option<String>,
    /// Solver name(s), comma separated.
    #[arg(long)]
    solver: Option<String>,
    /// `section.key=value` override; repeatable.
    #[arg(long = "set", short = 's', value_name = "SECTION.KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Per-experiment time threshold in seconds.
    #[arg(long, env = "QDECOMP_THRESHOLD")]
    threshold: Option<f64>,
}

enum Failure {
    Config(ConfigError),
    Cells(usize),
    Other(HarnessError),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(c) => Failure::Config(c),
            other => Failure::Other(other),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    }
}

impl ExperimentArgs {
    fn config(&self) -> Result<Config, Failure> {
        let mut cfg = match &self.config {
            Some(path) => Config::parse(&std::fs::read_to_string(path).map_err(io_err(path))?)?,
            None => Config::default(),
        };
        if let Some(p) = &self.problem {
            cfg.set("problem", "kind", p)?;
        }
        if let Some(s) = &self.solver {
            cfg.set("solver", "name", s)?;
        }
        for o in &self.overrides {
            cfg.set_dotted(o)?;
        }
        if let Some(seed) = self.seed {
            cfg.set("run", "seed", &seed.to_string())?;
        }
        if let Some(t) = self.threshold {
            cfg.set("run", "threshold", &t.to_string())?;
        }
        Ok(cfg)
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, HarnessError> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).map_err(io_err(p))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate { exp, out_dir } => {
            let cells = exp.config()?.experiments()?;
            std::fs::create_dir_all(&out_dir).map_err(io_err(&out_dir))?;
            for (i, spec) in cells.iter().enumerate() {
                let inst = spec.problem.generate(spec.seed).map_err(HarnessError::from)?;
                let stem = out_dir.join(format!("cell{i:04}"));
                let qubo = stem.with_extension("qubo");
                let meta = stem.with_extension("meta");
                std::fs::write(&qubo, inst.qubo.to_text()).map_err(io_err(&qubo))?;
                std::fs::write(&meta, to_sidecar(&inst)).map_err(io_err(&meta))?;
                eprintln!("{} ({} vars)", qubo.display(), inst.num_vars());
            }
            Ok(())
        }
        Command::Solve { exp, out } => {
            let cells = exp.config()?.experiments()?;
            if cells.len() != 1 {
                return Err(ConfigError::new(0, format!("solve needs exactly one experiment, the grid has {}", cells.len())).into());
            }
            finish(run_sweep(&cells, 1), &out)
        }
        Command::Sweep { exp, out, parallelism } => {
            let cfg = exp.config()?;
            let cells = cfg.experiments()?;
            let workers = match parallelism {
                Some(p) => p.max(1),
                None => cfg.run_settings()?.parallelism,
            };
            finish(run_sweep(&cells, workers), &out)
        }
        Command::Summarize { input, out } => {
            let records = read_records(File::open(&input).map_err(io_err(&input))?)?;
            write_summary(output(&out)?, &summarize(&records))?;
            Ok(())
        }
    }
}

fn finish(records: Vec<qdecomp_harness::ExperimentRecord>, out: &Option<PathBuf>) -> Result<(), Failure> {
    write_records(output(out)?, &records)?;
    let failed: Vec<_> = records.iter().filter(|r| r.outcome.is_err()).collect();
    for r in &failed {
        eprintln!("cell {} failed: {}", r.cell, r.outcome.as_ref().unwrap_err());
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Cells(failed.len()))
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Cells(n)) => {
            eprintln!("{n} cell(s) failed");
            ExitCode::from(2)
        }
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
