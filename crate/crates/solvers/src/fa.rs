use qdecomp_annealer::AnnealerBackend;
use qdecomp_core::{Qubo, ReducedQubo, Solution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::invalid;
use crate::report::{param, Stopwatch};
use crate::{derive_seed, Result, SolveBudget, SolveReport};

/// How a variable's consensus frequency is combined with the population-wide
/// frequency of the same bit value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreezeWeighting {
    /// `f_i(v) / F(v)`: rare values held unanimously rank highest.
    Normalize,
    /// `f_i(v) * F(v)`.
    Multiply,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FaParams {
    pub population_size: usize,
    pub num_generations: usize,
    pub crossover_rate: f64,
    /// Per-bit mutation probability; `None` uses `1 / N` of the current problem.
    pub mutation_rate: Option<f64>,
    pub freeze_batch: usize,
    pub weighting: FreezeWeighting,
}

impl Default for FaParams {
    fn default() -> Self {
        Self {
            population_size: 250,
            num_generations: 10,
            crossover_rate: 0.9,
            mutation_rate: None,
            freeze_batch: 10,
            weighting: FreezeWeighting::Normalize,
        }
    }
}

/// Consensus bit and freeze score of every variable.
///
/// The consensus is the majority value (0 on an exact tie); `f_i` is the share
/// of the population holding it and `F` the share of that value over every
/// position of every individual.
pub fn freeze_scores(population: &[Vec<bool>], weighting: FreezeWeighting) -> Vec<(bool, f64)> {
    let p = population.len();
    let n = population.first().map_or(0, Vec::len);
    if p == 0 || n == 0 {
        return Vec::new();
    }
    let ones: Vec<usize> = (0..n)
        .map(|i| population.iter().filter(|ind| ind[i]).count())
        .collect();
    let total_ones: usize = ones.iter().sum();
    let share_one = total_ones as f64 / (p * n) as f64;
    (0..n)
        .map(|i| {
            let v = 2 * ones[i] > p;
            let held = if v { ones[i] } else { p - ones[i] };
            let f = held as f64 / p as f64;
            let big_f = if v { share_one } else { 1.0 - share_one };
            let score = match weighting {
                FreezeWeighting::Normalize => f / big_f,
                FreezeWeighting::Multiply => f * big_f,
            };
            (v, score)
        })
        .collect()
}

/// Generational GA: tournament-2 selection, uniform crossover, per-bit
/// mutation and one elite. Returns the final population.
fn evolve(qubo: &Qubo, params: &FaParams, rng: &mut ChaCha8Rng) -> Vec<Vec<bool>> {
    let n = qubo.num_vars();
    let mutation = params.mutation_rate.unwrap_or(1.0 / n.max(1) as f64);
    let mut pop: Vec<Vec<bool>> = (0..params.population_size)
        .map(|_| (0..n).map(|_| rng.gen()).collect())
        .collect();
    let mut energy: Vec<f64> = pop.iter().map(|ind| qubo.energy_unchecked(ind)).collect();
    for _ in 0..params.num_generations {
        let elite = (0..pop.len())
            .min_by(|&a, &b| energy[a].total_cmp(&energy[b]).then(a.cmp(&b)))
            .expect("population_size >= 2");
        let mut next = Vec::with_capacity(pop.len());
        let mut next_energy = Vec::with_capacity(pop.len());
        next.push(pop[elite].clone());
        next_energy.push(energy[elite]);
        let pick = |rng: &mut ChaCha8Rng| {
            let a = rng.gen_range(0..pop.len());
            let b = rng.gen_range(0..pop.len());
            if energy[b] < energy[a] {
                b
            } else {
                a
            }
        };
        while next.len() < pop.len() {
            let (ma, pa) = (pick(rng), pick(rng));
            let mut child = if rng.gen_bool(params.crossover_rate) {
                (0..n)
                    .map(|i| if rng.gen() { pop[ma][i] } else { pop[pa][i] })
                    .collect()
            } else {
                pop[ma].clone()
            };
            for bit in child.iter_mut() {
                if rng.gen_bool(mutation) {
                    *bit = !*bit;
                }
            }
            next_energy.push(qubo.energy_unchecked(&child));
            next.push(child);
        }
        pop = next;
        energy = next_energy;
    }
    pop
}

/// Evolve a population, freeze the variables it agrees on most, and repeat on
/// the shrunken problem until it fits the backend, which solves the rest.
pub fn solve_fa(
    qubo: &Qubo,
    backend: &AnnealerBackend,
    budget: SolveBudget,
    params: &FaParams,
    seed: u64,
) -> Result<SolveReport> {
    if params.population_size < 2 {
        return Err(invalid("population_size must be at least 2"));
    }
    if params.freeze_batch == 0 {
        return Err(invalid("freeze_batch must be positive"));
    }
    if !(0.0..=1.0).contains(&params.crossover_rate) {
        return Err(invalid(format!("crossover_rate {}", params.crossover_rate)));
    }
    if let Some(m) = params.mutation_rate {
        if !(0.0..=1.0).contains(&m) {
            return Err(invalid(format!("mutation_rate {m}")));
        }
    }
    let echo = vec![
        param("population_size", params.population_size),
        param("num_generations", params.num_generations),
        param("crossover_rate", params.crossover_rate),
        param(
            "mutation_rate",
            params.mutation_rate.map_or("1/N".to_string(), |m| m.to_string()),
        ),
        param("freeze_batch", params.freeze_batch),
        param(
            "weighting",
            match params.weighting {
                FreezeWeighting::Normalize => "normalize",
                FreezeWeighting::Multiply => "multiply",
            },
        ),
    ];
    let mut clock = Stopwatch::start(budget);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reduced = ReducedQubo::identity(qubo.clone());
    let capacity = backend.capacity();
    let mut timed_out = false;
    while reduced.qubo().num_vars() > capacity {
        if clock.expired() {
            timed_out = true;
            break;
        }
        let pop = evolve(reduced.qubo(), params, &mut rng);
        let scores = freeze_scores(&pop, params.weighting);
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[b].1.total_cmp(&scores[a].1).then(a.cmp(&b)));
        let count = params.freeze_batch.min(reduced.qubo().num_vars() - capacity);
        let assignments: Vec<(usize, bool)> = order[..count].iter().map(|&i| (i, scores[i].0)).collect();
        reduced = reduced.fix(&assignments)?;
    }
    let local = if timed_out {
        crate::by_bias_sign(reduced.qubo().linear_slice().iter().copied())
    } else {
        let out = backend.subsolve(reduced.qubo(), derive_seed(seed, 0))?;
        clock.record(&out);
        out.solution.bits
    };
    let bits = reduced.lift(&local)?;
    let energy = qubo.energy_unchecked(&bits);
    Ok(clock.finish("fa", echo, Solution { bits, energy }, timed_out))
}
