use qdecomp_annealer::AnnealerBackend;
use qdecomp_core::{Qubo, Solution};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::{param, Stopwatch};
use crate::{derive_seed, Result, SolveBudget, SolveReport};

/// Repeatedly solve the highest-degree remaining node together with a halo of
/// its remaining neighbours, clamped against everything solved so far.
///
/// Nodes left without remaining neighbours are set from the sign of their
/// effective bias, which already includes the pull of solved 1-bits.
pub fn solve_ich(qubo: &Qubo, backend: &AnnealerBackend, budget: SolveBudget, seed: u64) -> Result<SolveReport> {
    let n = qubo.num_vars();
    let max_nodes = backend.capacity();
    let mut clock = Stopwatch::start(budget);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![false; n];
    let mut remaining = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|i| qubo.degree(i)).collect();
    let mut left = n;
    let mut isolated = 0usize;
    let mut timed_out = false;
    let mut call = 0u64;

    let remove = |i: usize, remaining: &mut Vec<bool>, degree: &mut Vec<usize>| {
        remaining[i] = false;
        for &(j, _) in qubo.neighbors(i) {
            if remaining[j] {
                degree[j] -= 1;
            }
        }
    };
    let effective_bias = |i: usize, x: &[bool]| {
        qubo.linear(i)
            + qubo
                .neighbors(i)
                .iter()
                .filter(|&&(j, _)| x[j])
                .map(|&(_, b)| b)
                .sum::<f64>()
    };

    while left > 0 {
        let lonely: Vec<usize> = (0..n).filter(|&i| remaining[i] && degree[i] == 0).collect();
        for i in lonely {
            x[i] = effective_bias(i, &x) < 0.0;
            remove(i, &mut remaining, &mut degree);
            isolated += 1;
            left -= 1;
        }
        if left == 0 {
            break;
        }
        if clock.expired() {
            timed_out = true;
            break;
        }
        let center = (0..n)
            .filter(|&i| remaining[i])
            .max_by(|&a, &b| degree[a].cmp(&degree[b]).then(b.cmp(&a)))
            .expect("left > 0");
        let halo: Vec<usize> = qubo
            .neighbors(center)
            .iter()
            .map(|&(j, _)| j)
            .filter(|&j| remaining[j])
            .collect();
        let mut members: Vec<usize> = if halo.len() > max_nodes - 1 {
            let mut keep: Vec<usize> = sample(&mut rng, halo.len(), max_nodes - 1)
                .into_iter()
                .map(|k| halo[k])
                .collect();
            keep.sort_unstable();
            keep
        } else {
            halo
        };
        members.push(center);
        let sub = qubo.clamp_subqubo(&members, &x)?;
        let out = backend.subsolve(sub.qubo(), derive_seed(seed, call))?;
        call += 1;
        clock.record(&out);
        for (&i, &v) in sub.index_map().iter().zip(&out.solution.bits) {
            x[i] = v;
        }
        for &i in sub.index_map() {
            remove(i, &mut remaining, &mut degree);
            left -= 1;
        }
    }
    let energy = qubo.energy_unchecked(&x);
    let echo = vec![param("max_nodes", max_nodes), param("isolated", isolated)];
    Ok(clock.finish("ich", echo, Solution { bits: x, energy }, timed_out))
}
