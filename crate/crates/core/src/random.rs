//! Seeded random QUBOs for benchmarks and property tests.
//!
//! Coefficients are drawn from the grid `k / 64` with `k` a nonzero integer in
//! `[-64, 64]`. Sums of such values are exact in double precision, so energy
//! identities (fixing, clamping) can be checked with `==`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Qubo, QuboBuilder};

pub const GRID: f64 = 64.0;

fn grid_value<R: Rng>(rng: &mut R) -> f64 {
    let k: i32 = rng.gen_range(1..=64);
    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    sign * k as f64 / GRID
}

/// Every bias nonzero; each pair coupled independently with probability
/// `density`.
pub fn random_qubo(num_vars: usize, density: f64, seed: u64) -> Qubo {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = QuboBuilder::new(num_vars);
    for i in 0..num_vars {
        b.add_linear(i, grid_value(&mut rng));
    }
    for i in 0..num_vars {
        for j in i + 1..num_vars {
            if rng.gen_bool(density.clamp(0.0, 1.0)) {
                b.add_quadratic(i, j, grid_value(&mut rng));
            }
        }
    }
    b.build()
}

/// Random assignment of `num_vars` bits.
pub fn random_bits(num_vars: usize, seed: u64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..num_vars).map(|_| rng.gen()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_dense_when_asked() {
        let a = random_qubo(12, 1.0, 3);
        assert_eq!(a, random_qubo(12, 1.0, 3));
        assert_eq!(a.num_couplings(), 66);
        assert_ne!(a, random_qubo(12, 1.0, 4));
        assert_eq!(random_qubo(12, 0.0, 3).num_couplings(), 0);
    }
}
