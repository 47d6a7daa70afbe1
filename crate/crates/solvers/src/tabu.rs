use qdecomp_core::Qubo;

#[derive(Debug, Clone, PartialEq)]
pub struct TabuOutcome {
    pub bits: Vec<bool>,
    pub energy: f64,
}

/// Single-flip tabu search from `start`.
///
/// Each iteration makes the best flip that is not tabu (lowest index on ties);
/// a tabu flip is allowed when it beats the best energy seen. A flipped
/// variable stays tabu for `tenure` iterations. Returns the best assignment
/// visited, with its energy recomputed from scratch.
pub fn tabu_search(qubo: &Qubo, start: &[bool], iterations: usize, tenure: usize) -> TabuOutcome {
    let n = qubo.num_vars();
    let mut x = start.to_vec();
    let mut field: Vec<f64> = (0..n)
        .map(|i| {
            qubo.linear(i)
                + qubo
                    .neighbors(i)
                    .iter()
                    .filter(|&&(j, _)| x[j])
                    .map(|&(_, b)| b)
                    .sum::<f64>()
        })
        .collect();
    let mut energy = qubo.energy_unchecked(&x);
    let mut best = x.clone();
    let mut best_energy = energy;
    let mut tabu_until = vec![0usize; n];
    for it in 1..=iterations {
        let mut pick: Option<(usize, f64)> = None;
        for i in 0..n {
            let delta = if x[i] { -field[i] } else { field[i] };
            let allowed = tabu_until[i] < it || energy + delta < best_energy;
            if allowed && pick.map_or(true, |(_, d)| delta < d) {
                pick = Some((i, delta));
            }
        }
        let Some((i, delta)) = pick else { break };
        x[i] = !x[i];
        energy += delta;
        let sign = if x[i] { 1.0 } else { -1.0 };
        for &(j, b) in qubo.neighbors(i) {
            field[j] += sign * b;
        }
        tabu_until[i] = it + tenure;
        if energy < best_energy {
            best_energy = energy;
            best.copy_from_slice(&x);
        }
    }
    let energy = qubo.energy_unchecked(&best);
    TabuOutcome { bits: best, energy }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qdecomp_core::random::random_qubo;

    fn brute(q: &Qubo) -> f64 {
        let n = q.num_vars();
        (0..1u32 << n)
            .map(|c| q.energy_unchecked(&(0..n).map(|i| c >> i & 1 == 1).collect::<Vec<_>>()))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn never_worse_than_start() {
        let q = random_qubo(30, 0.3, 4);
        let start = vec![true; 30];
        let out = tabu_search(&q, &start, 200, 5);
        assert!(out.energy <= q.energy(&start).unwrap());
        assert_eq!(out.energy, q.energy(&out.bits).unwrap());
    }

    #[test]
    fn finds_small_optima() {
        let mut hits = 0;
        for seed in 0..20 {
            let q = random_qubo(10, 0.5, seed);
            let out = tabu_search(&q, &vec![false; 10], 200, 3);
            if out.energy == brute(&q) {
                hits += 1;
            }
        }
        assert!(hits >= 18, "{hits}/20");
    }

    #[test]
    fn zero_iterations_returns_start() {
        let q = random_qubo(5, 0.5, 1);
        let start = vec![true, false, true, false, true];
        assert_eq!(tabu_search(&q, &start, 0, 2).bits, start);
    }
}
