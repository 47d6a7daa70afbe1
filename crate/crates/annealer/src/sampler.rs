use qdecomp_core::Qubo;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Geometric temperature ladder over `sweeps` full sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealSchedule {
    pub t_hot: f64,
    pub t_cold: f64,
    pub sweeps: usize,
}

impl AnnealSchedule {
    /// `T_hot = max |coefficient|`, `T_cold = 1e-3 T_hot`.
    pub fn for_qubo(qubo: &Qubo, sweeps: usize) -> Self {
        let t_hot = qubo.max_abs_coefficient();
        Self {
            t_hot,
            t_cold: 1e-3 * t_hot,
            sweeps,
        }
    }

    pub fn temperature(&self, sweep: usize) -> f64 {
        if self.sweeps <= 1 {
            return self.t_cold;
        }
        let frac = sweep as f64 / (self.sweeps - 1) as f64;
        self.t_hot * (self.t_cold / self.t_hot).powf(frac)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Read {
    pub bits: Vec<bool>,
    pub energy: f64,
}

/// One simulated-annealing run from a uniformly random start.
pub fn anneal(qubo: &Qubo, schedule: &AnnealSchedule, rng: &mut impl Rng) -> Vec<bool> {
    let n = qubo.num_vars();
    let mut bits: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    if schedule.t_hot <= 0.0 || n == 0 {
        return bits;
    }
    // field[i] = a_i + sum_j b_ij x_j, the energy change of raising x_i
    let mut field: Vec<f64> = qubo.linear_slice().to_vec();
    for i in 0..n {
        if bits[i] {
            for &(j, b) in qubo.neighbors(i) {
                field[j] += b;
            }
        }
    }
    for sweep in 0..schedule.sweeps {
        let beta = 1.0 / schedule.temperature(sweep);
        for i in 0..n {
            let delta = if bits[i] { -field[i] } else { field[i] };
            if delta <= 0.0 || rng.gen::<f64>() < (-delta * beta).exp() {
                bits[i] = !bits[i];
                let step = if bits[i] { 1.0 } else { -1.0 };
                for &(j, b) in qubo.neighbors(i) {
                    field[j] += step * b;
                }
            }
        }
    }
    bits
}

/// Sweep single-bit flips in index order, taking every one that strictly
/// lowers the energy, until none does.
pub fn local_descent(qubo: &Qubo, bits: &mut [bool]) {
    let n = qubo.num_vars();
    let mut field: Vec<f64> = qubo.linear_slice().to_vec();
    for i in 0..n {
        if bits[i] {
            for &(j, b) in qubo.neighbors(i) {
                field[j] += b;
            }
        }
    }
    let mut improved = true;
    while improved {
        improved = false;
        for i in 0..n {
            let delta = if bits[i] { -field[i] } else { field[i] };
            if delta < 0.0 {
                bits[i] = !bits[i];
                let step = if bits[i] { 1.0 } else { -1.0 };
                for &(j, b) in qubo.neighbors(i) {
                    field[j] += step * b;
                }
                improved = true;
            }
        }
    }
}

/// `num_reads` independent annealing runs, sorted by energy (stable).
pub fn sample(qubo: &Qubo, num_reads: usize, sweeps: usize, seed: u64) -> Vec<Read> {
    let schedule = AnnealSchedule::for_qubo(qubo, sweeps);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reads: Vec<Read> = (0..num_reads)
        .map(|_| {
            let bits = anneal(qubo, &schedule, &mut rng);
            let energy = qubo.energy_unchecked(&bits);
            Read { bits, energy }
        })
        .collect();
    reads.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    reads
}
