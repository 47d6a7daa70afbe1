use std::collections::VecDeque;
use std::time::Instant;

use qdecomp_annealer::{heuristic_embed, logical_graph, AnnealerBackend};
use qdecomp_core::{Qubo, Solution};

use crate::layout::LayoutCoords;
use crate::report::{param, Stopwatch};
use crate::{by_bias_sign, derive_seed, Result, SolveBudget, SolveReport};

#[derive(Debug, Clone, PartialEq)]
pub struct PcdParams {
    pub layout_iterations: usize,
    /// Restarts per embedding attempt; `None` uses the backend budget.
    pub embed_effort: Option<usize>,
}

impl Default for PcdParams {
    fn default() -> Self {
        Self {
            layout_iterations: 1000,
            embed_effort: None,
        }
    }
}

/// Single-flip descent over `vars` until no flip lowers the energy.
fn descend(qubo: &Qubo, x: &mut [bool], vars: &[usize]) {
    loop {
        let mut improved = false;
        for &i in vars {
            let field = qubo.linear(i)
                + qubo
                    .neighbors(i)
                    .iter()
                    .filter(|&&(j, _)| x[j])
                    .map(|&(_, b)| b)
                    .sum::<f64>();
            let delta = if x[i] { -field } else { field };
            if delta < 0.0 {
                x[i] = !x[i];
                improved = true;
            }
        }
        if !improved {
            return;
        }
    }
}

/// Lay the graph out, cut it into slices along the principal axis, solve each
/// slice on its own heuristic embedding, and stitch the parts with greedy
/// descent over the variables touching a cut.
///
/// Slices start no larger than the backend clique capacity and are halved at
/// the median whenever embedding fails.
pub fn solve_pcd(
    qubo: &Qubo,
    backend: &AnnealerBackend,
    budget: SolveBudget,
    params: &PcdParams,
    seed: u64,
) -> Result<SolveReport> {
    let n = qubo.num_vars();
    let effort = params.embed_effort.unwrap_or(backend.budget().embed_effort).max(1);
    let echo = vec![
        param("layout_iterations", params.layout_iterations),
        param("embed_effort", effort),
    ];
    let mut clock = Stopwatch::start(budget);
    if qubo.num_couplings() == 0 {
        let bits = by_bias_sign(qubo.linear_slice().iter().copied());
        let energy = qubo.energy_unchecked(&bits);
        return Ok(clock.finish("pcd", echo, Solution { bits, energy }, false));
    }
    let graph = logical_graph(qubo);
    let order = LayoutCoords::compute(&graph, params.layout_iterations, seed).order();

    let cap = backend.capacity().max(1);
    let pieces = n.div_ceil(cap);
    let mut queue: VecDeque<Vec<usize>> = (0..pieces)
        .map(|p| order[p * n / pieces..(p + 1) * n / pieces].to_vec())
        .collect();
    let mut part = vec![usize::MAX; n];
    let mut x = vec![false; n];
    let mut solved = vec![false; n];
    let mut parts = 0;
    let mut call = 0u64;
    let mut timed_out = false;
    while let Some(slice) = queue.pop_front() {
        if clock.expired() {
            timed_out = true;
            queue.push_front(slice);
            break;
        }
        let sub = qubo.induced(&slice)?;
        let stream = call;
        call += 1;
        let search = Instant::now();
        match heuristic_embed(&logical_graph(&sub), backend.topology(), effort, derive_seed(seed, stream)) {
            Ok(emb) => {
                clock.add_embedding(search.elapsed());
                let out = backend.subsolve_with_embedding(&sub, &emb, derive_seed(seed, stream))?;
                clock.record(&out);
                for (&i, &v) in slice.iter().zip(&out.solution.bits) {
                    x[i] = v;
                    solved[i] = true;
                    part[i] = parts;
                }
                parts += 1;
            }
            Err(failure) => {
                clock.add_embedding(failure.elapsed);
                let mid = slice.len() / 2;
                queue.push_front(slice[mid..].to_vec());
                queue.push_front(slice[..mid].to_vec());
            }
        }
    }
    // slices left over after a timeout take their bias sign and count as one
    // part each for the stitch
    for slice in queue {
        for &i in &slice {
            x[i] = qubo.linear(i) < 0.0;
            part[i] = parts;
        }
        parts += 1;
    }
    let cut: Vec<usize> = (0..n)
        .filter(|&i| qubo.neighbors(i).iter().any(|&(j, _)| part[j] != part[i]))
        .collect();
    descend(qubo, &mut x, &cut);
    let energy = qubo.energy_unchecked(&x);
    let mut echo = echo;
    echo.push(param("parts", parts));
    Ok(clock.finish("pcd", echo, Solution { bits: x, energy }, timed_out))
}
