use qdecomp_core::{Qubo, Solution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{param, Stopwatch};
use crate::{SolveBudget, SolveReport};

/// Uniform random bits; purely classical.
pub fn solve_random(qubo: &Qubo, seed: u64) -> SolveReport {
    let clock = Stopwatch::start(SolveBudget::default());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bits: Vec<bool> = (0..qubo.num_vars()).map(|_| rng.gen()).collect();
    let energy = qubo.energy_unchecked(&bits);
    clock.finish("random", vec![param("seed", seed)], Solution { bits, energy }, false)
}
