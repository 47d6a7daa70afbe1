use std::io::Write;

use crate::experiment::ExperimentRecord;
use crate::Result;

/// Aggregates for one (problem, solver) pair. Means and minima cover the
/// records that produced metrics; `None` when none did.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub problem: String,
    pub solver: String,
    pub runs: usize,
    pub failed: usize,
    pub mean_energy: Option<f64>,
    pub min_energy: Option<f64>,
    pub mean_quality: Option<f64>,
    pub mean_total_time: Option<f64>,
    pub mean_classical_time: Option<f64>,
    pub mean_embedding_time: Option<f64>,
    pub mean_quantum_time: Option<f64>,
    /// Share of runs that finished within the threshold.
    pub completion_rate: f64,
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Group by (problem, solver), in order of first appearance.
pub fn summarize(records: &[ExperimentRecord]) -> Vec<SummaryRow> {
    let mut keys: Vec<(&str, &str)> = Vec::new();
    for r in records {
        let k = (r.problem.as_str(), r.solver.as_str());
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .map(|(problem, solver)| {
            let group: Vec<&ExperimentRecord> = records
                .iter()
                .filter(|r| r.problem == problem && r.solver == solver)
                .collect();
            let ok: Vec<_> = group.iter().filter_map(|r| r.metrics()).collect();
            let col = |f: fn(&crate::Metrics) -> f64| ok.iter().map(|m| f(m)).collect::<Vec<f64>>();
            let energies = col(|m| m.solution_energy);
            let completed = ok.iter().filter(|m| !m.timed_out).count();
            SummaryRow {
                problem: problem.to_string(),
                solver: solver.to_string(),
                runs: group.len(),
                failed: group.len() - ok.len(),
                mean_energy: mean(&energies),
                min_energy: energies.iter().copied().min_by(f64::total_cmp),
                mean_quality: mean(&col(|m| m.fixed_quality)),
                mean_total_time: mean(&col(|m| m.total_time)),
                mean_classical_time: mean(&col(|m| m.classical_time)),
                mean_embedding_time: mean(&col(|m| m.embedding_time)),
                mean_quantum_time: mean(&col(|m| m.quantum_time)),
                completion_rate: completed as f64 / group.len() as f64,
            }
        })
        .collect()
}

pub fn write_summary<W: Write>(out: W, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "problem",
        "solver",
        "runs",
        "failed",
        "mean_energy",
        "min_energy",
        "mean_quality",
        "mean_total_s",
        "mean_classical_s",
        "mean_embedding_s",
        "mean_quantum_s",
        "completion_rate",
    ])?;
    let opt = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
    for r in rows {
        w.write_record([
            r.problem.clone(),
            r.solver.clone(),
            r.runs.to_string(),
            r.failed.to_string(),
            opt(r.mean_energy),
            opt(r.min_energy),
            opt(r.mean_quality),
            opt(r.mean_total_time),
            opt(r.mean_classical_time),
            opt(r.mean_embedding_time),
            opt(r.mean_quantum_time),
            r.completion_rate.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
