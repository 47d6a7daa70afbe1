//! Results CSV. The first column is the schema version so analysis scripts
//! can refuse files they do not understand.

use std::io::{Read, Write};

use crate::experiment::{ExperimentRecord, Metrics};
use crate::{HarnessError, Result};

pub const SCHEMA_VERSION: u32 = 1;

pub const COLUMNS: [&str; 22] = [
    "schema_version",
    "cell",
    "problem",
    "problem_params",
    "solver",
    "solver_params",
    "backend_params",
    "threshold_s",
    "seed",
    "status",
    "graph_size",
    "edge_density",
    "total_time_s",
    "classical_time_s",
    "embedding_time_s",
    "quantum_time_s",
    "solution_energy",
    "broken_constraints",
    "fixed_quality",
    "timed_out",
    "subproblems",
    "error",
];

fn row(r: &ExperimentRecord) -> Vec<String> {
    let mut out = vec![
        SCHEMA_VERSION.to_string(),
        r.cell.to_string(),
        r.problem.clone(),
        r.problem_params.clone(),
        r.solver.clone(),
        r.solver_params.clone(),
        r.backend_params.clone(),
        r.threshold_seconds.to_string(),
        r.seed.to_string(),
    ];
    match &r.outcome {
        Ok(m) => {
            out.push("ok".into());
            out.extend([
                m.graph_size.to_string(),
                m.edge_density.map_or(String::new(), |d| d.to_string()),
                m.total_time.to_string(),
                m.classical_time.to_string(),
                m.embedding_time.to_string(),
                m.quantum_time.to_string(),
                m.solution_energy.to_string(),
                m.broken_constraints.map_or("N/A".into(), |b| b.to_string()),
                m.fixed_quality.to_string(),
                m.timed_out.to_string(),
                m.subproblems.to_string(),
                String::new(),
            ]);
        }
        Err(e) => {
            out.push("failed".into());
            out.extend(std::iter::repeat(String::new()).take(11));
            out.push(e.clone());
        }
    }
    out
}

pub fn write_records<W: Write>(out: W, records: &[ExperimentRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in records {
        w.write_record(row(r))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn records_to_string(records: &[ExperimentRecord]) -> String {
    let mut buf = Vec::new();
    write_records(&mut buf, records).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is UTF-8")
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize) -> Result<T> {
    let raw = &rec[i];
    raw.parse()
        .map_err(|_| HarnessError::Format(format!("column {} has bad value `{raw}`", COLUMNS[i])))
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<ExperimentRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = rdr.headers()?.clone();
    if header.iter().ne(COLUMNS.iter().copied()) {
        return Err(HarnessError::Format(format!(
            "unexpected header; schema version {SCHEMA_VERSION} expects {}",
            COLUMNS.join(",")
        )));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let version: u32 = field(&rec, 0)?;
        if version != SCHEMA_VERSION {
            return Err(HarnessError::Format(format!("schema version {version}, expected {SCHEMA_VERSION}")));
        }
        let outcome = match &rec[9] {
            "ok" => Ok(Metrics {
                graph_size: field(&rec, 10)?,
                edge_density: if rec[11].is_empty() { None } else { Some(field(&rec, 11)?) },
                total_time: field(&rec, 12)?,
                classical_time: field(&rec, 13)?,
                embedding_time: field(&rec, 14)?,
                quantum_time: field(&rec, 15)?,
                solution_energy: field(&rec, 16)?,
                broken_constraints: if &rec[17] == "N/A" { None } else { Some(field(&rec, 17)?) },
                fixed_quality: field(&rec, 18)?,
                timed_out: field(&rec, 19)?,
                subproblems: field(&rec, 20)?,
            }),
            "failed" => Err(rec[21].to_string()),
            other => return Err(HarnessError::Format(format!("status `{other}`"))),
        };
        out.push(ExperimentRecord {
            cell: field(&rec, 1)?,
            problem: rec[2].to_string(),
            problem_params: rec[3].to_string(),
            solver: rec[4].to_string(),
            solver_params: rec[5].to_string(),
            backend_params: rec[6].to_string(),
            threshold_seconds: field(&rec, 7)?,
            seed: field(&rec, 8)?,
            outcome,
        });
    }
    Ok(out)
}
