use qdecomp_annealer::AnnealerBackend;
use qdecomp_core::{Qubo, Solution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::invalid;
use crate::report::{param, Stopwatch};
use crate::tabu::tabu_search;
use crate::{derive_seed, Result, SolveBudget, SolveReport};

#[derive(Debug, Clone, PartialEq)]
pub struct QbParams {
    /// Consecutive main-loop iterations without a new best before stopping.
    pub num_repeats: usize,
    /// Sub-problem size; `None` uses the backend capacity.
    pub subqubo_size: Option<usize>,
    pub tabu_tenure: usize,
    /// Tabu iterations per main-loop pass; `None` uses `N`.
    pub tabu_iterations: Option<usize>,
}

impl Default for QbParams {
    fn default() -> Self {
        Self {
            num_repeats: 1,
            subqubo_size: None,
            tabu_tenure: 10,
            tabu_iterations: None,
        }
    }
}

/// Flip-impact of every variable: `|E(x with i flipped) - E(x)|`.
fn impacts(qubo: &Qubo, x: &[bool]) -> Vec<f64> {
    (0..qubo.num_vars())
        .map(|i| {
            let field = qubo.linear(i)
                + qubo
                    .neighbors(i)
                    .iter()
                    .filter(|&&(j, _)| x[j])
                    .map(|&(_, b)| b)
                    .sum::<f64>();
            field.abs()
        })
        .collect()
}

/// Impact-ranked decomposition with clamped sub-problems on the cached clique
/// embedding, followed by a full-problem tabu pass each iteration.
pub fn solve_qb(
    qubo: &Qubo,
    backend: &AnnealerBackend,
    budget: SolveBudget,
    params: &QbParams,
    seed: u64,
) -> Result<SolveReport> {
    let size = params.subqubo_size.unwrap_or(backend.capacity());
    if size == 0 || size > backend.capacity() {
        return Err(invalid(format!(
            "subqubo_size {size} outside 1..={}",
            backend.capacity()
        )));
    }
    if params.num_repeats == 0 {
        return Err(invalid("num_repeats must be positive"));
    }
    let n = qubo.num_vars();
    let tabu_iters = params.tabu_iterations.unwrap_or(n);
    let echo = vec![
        param("num_repeats", params.num_repeats),
        param("subqubo_size", size),
        param("tabu_tenure", params.tabu_tenure),
        param("tabu_iterations", tabu_iters),
    ];
    let mut clock = Stopwatch::start(budget);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let mut energy = qubo.energy_unchecked(&x);
    if n == 0 {
        return Ok(clock.finish("qbsolv", echo, Solution { bits: x, energy }, false));
    }
    let mut best = Solution {
        bits: x.clone(),
        energy,
    };
    let mut stale = 0;
    let mut timed_out = false;
    let mut call = 0u64;
    'main: while stale < params.num_repeats {
        let imp = impacts(qubo, &x);
        let mut ranked: Vec<usize> = (0..n).collect();
        ranked.sort_by(|&a, &b| imp[b].total_cmp(&imp[a]).then(a.cmp(&b)));
        for group in ranked.chunks(size) {
            if clock.expired() {
                timed_out = true;
                break 'main;
            }
            let sub = qubo.clamp_subqubo(group, &x)?;
            let out = backend.subsolve(sub.qubo(), derive_seed(seed, call))?;
            call += 1;
            clock.record(&out);
            let candidate = sub.lift(&out.solution.bits)?;
            let e = qubo.energy_unchecked(&candidate);
            if e < energy {
                x = candidate;
                energy = e;
            }
        }
        let polished = tabu_search(qubo, &x, tabu_iters, params.tabu_tenure);
        if polished.energy < energy {
            x = polished.bits;
            energy = polished.energy;
        }
        if energy < best.energy {
            best = Solution {
                bits: x.clone(),
                energy,
            };
            stale = 0;
        } else {
            stale += 1;
        }
    }
    Ok(clock.finish("qbsolv", echo, best, timed_out))
}
