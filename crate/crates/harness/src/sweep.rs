use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::experiment::{run_cell, ExperimentRecord, ExperimentSpec};

/// Run every cell, up to `parallelism` at a time, and return one record per
/// cell in grid order. A failing cell yields an error record; the rest still
/// run.
pub fn run_sweep(cells: &[ExperimentSpec], parallelism: usize) -> Vec<ExperimentRecord> {
    let workers = parallelism.clamp(1, cells.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<ExperimentRecord>>> = Mutex::new(vec![None; cells.len()]);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(spec) = cells.get(i) else { break };
                let record = run_cell(spec, i);
                slots.lock().unwrap()[i] = Some(record);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every cell ran"))
        .collect()
}
