//! Symmetric TSP as a permutation-matrix QUBO.
//!
//! Variable `x[v][p] = v * n + p` is 1 when vertex `v` sits at tour position
//! `p`. Each vertex row and each position column carries the one-hot penalty
//! `A (1 - sum x)^2`, and consecutive positions (cyclically) carry
//! `B * d(u, v) * x[u][p] * x[v][p + 1]`. Expanding the squares gives a bias of
//! `-2A` per variable, `+2A` on pairs sharing a row or column, and a constant
//! `2nA`, which is stored as the offset; a valid tour therefore has energy
//! exactly `B * length`.

use qdecomp_core::QuboBuilder;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{invalid, ProblemError, ProblemInstance, ProblemMeta, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TspMeta {
    pub n: usize,
    pub distances: Vec<Vec<f64>>,
    pub penalty_a: f64,
    pub penalty_b: f64,
}

impl TspMeta {
    /// Default multipliers: `B = 1`, `A = 2 n max_distance`.
    pub fn with_default_penalties(distances: Vec<Vec<f64>>) -> Result<Self> {
        let n = distances.len();
        let max = max_distance(&distances);
        let a = if max > 0.0 { 2.0 * n as f64 * max } else { 1.0 };
        Self::new(distances, a, 1.0)
    }

    pub fn new(distances: Vec<Vec<f64>>, penalty_a: f64, penalty_b: f64) -> Result<Self> {
        let n = distances.len();
        if n < 3 {
            return Err(invalid(format!("TSP needs at least 3 vertices, got {n}")));
        }
        for (u, row) in distances.iter().enumerate() {
            if row.len() != n {
                return Err(invalid(format!("distance row {u} has {} entries", row.len())));
            }
            if row[u] != 0.0 {
                return Err(invalid(format!("nonzero diagonal at {u}")));
            }
            for (v, &d) in row.iter().enumerate() {
                if !(d.is_finite() && d >= 0.0) || d != distances[v][u] {
                    return Err(invalid(format!("distance ({u}, {v}) is not symmetric and nonnegative")));
                }
            }
        }
        if !(penalty_b.is_finite() && penalty_b >= 0.0) {
            return Err(ProblemError::InvalidPenalty(format!("penalty_B = {penalty_b}")));
        }
        let max = max_distance(&distances);
        if !(penalty_a.is_finite() && penalty_a > penalty_b * max) {
            return Err(ProblemError::InvalidPenalty(format!(
                "penalty_A = {penalty_a} must exceed penalty_B * max distance = {}",
                penalty_b * max
            )));
        }
        Ok(Self {
            n,
            distances,
            penalty_a,
            penalty_b,
        })
    }

    pub fn var(&self, vertex: usize, position: usize) -> usize {
        vertex * self.n + position
    }

    /// Cyclic length of a tour given as the vertex at each position.
    pub fn tour_length(&self, tour: &[usize]) -> f64 {
        (0..tour.len())
            .map(|p| self.distances[tour[p]][tour[(p + 1) % tour.len()]])
            .sum()
    }

    /// Permutation-matrix bits of a tour.
    pub fn tour_bits(&self, tour: &[usize]) -> Vec<bool> {
        let mut bits = vec![false; self.n * self.n];
        for (p, &v) in tour.iter().enumerate() {
            bits[self.var(v, p)] = true;
        }
        bits
    }
}

fn max_distance(d: &[Vec<f64>]) -> f64 {
    d.iter().flatten().copied().fold(0.0, f64::max)
}

/// Symmetric matrix with off-diagonal entries uniform on `[1, 10]`.
pub fn gen_tsp_random(n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if n < 3 {
        return Err(invalid(format!("TSP needs at least 3 vertices, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = vec![vec![0.0; n]; n];
    for u in 0..n {
        for v in u + 1..n {
            let w = rng.gen_range(1.0..=10.0);
            d[u][v] = w;
            d[v][u] = w;
        }
    }
    Ok(d)
}

pub fn tsp_to_qubo(meta: TspMeta, seed: u64) -> Result<ProblemInstance> {
    let n = meta.n;
    let a = meta.penalty_a;
    let mut b = QuboBuilder::new(n * n);
    b.add_offset(2.0 * n as f64 * a);
    for v in 0..n {
        for p in 0..n {
            let i = meta.var(v, p);
            b.add_linear(i, -2.0 * a);
            for p2 in p + 1..n {
                b.add_quadratic(i, meta.var(v, p2), 2.0 * a);
            }
            for v2 in v + 1..n {
                b.add_quadratic(i, meta.var(v2, p), 2.0 * a);
            }
        }
    }
    for u in 0..n {
        for v in 0..n {
            let w = meta.penalty_b * meta.distances[u][v];
            if u == v || w == 0.0 {
                continue;
            }
            for p in 0..n {
                b.add_quadratic(meta.var(u, p), meta.var(v, (p + 1) % n), w);
            }
        }
    }
    Ok(ProblemInstance {
        qubo: b.build(),
        meta: ProblemMeta::Tsp(meta),
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TspDecode {
    Tour(Vec<usize>),
    Violations { broken: usize },
}

pub fn decode(meta: &TspMeta, bits: &[bool]) -> TspDecode {
    let broken = count_broken(meta, bits);
    if broken > 0 {
        return TspDecode::Violations { broken };
    }
    let n = meta.n;
    let tour = (0..n)
        .map(|p| (0..n).find(|&v| bits[meta.var(v, p)]).expect("one vertex per position"))
        .collect();
    TspDecode::Tour(tour)
}

/// Vertices not used exactly once plus positions not filled exactly once.
pub fn count_broken(meta: &TspMeta, bits: &[bool]) -> usize {
    let n = meta.n;
    let rows = (0..n)
        .filter(|&v| (0..n).filter(|&p| bits[meta.var(v, p)]).count() != 1)
        .count();
    let cols = (0..n)
        .filter(|&p| (0..n).filter(|&v| bits[meta.var(v, p)]).count() != 1)
        .count();
    rows + cols
}

/// Always returns a valid tour.
///
/// Positions claimed by exactly one vertex keep it (if still unused); contested
/// positions keep their smallest unused claimant; empty positions are then
/// filled left to right with the unused vertex adding the least length next to
/// already placed neighbors (ties: smallest vertex).
pub fn repair(meta: &TspMeta, bits: &[bool]) -> Vec<usize> {
    let n = meta.n;
    let claimants: Vec<Vec<usize>> = (0..n)
        .map(|p| (0..n).filter(|&v| bits[meta.var(v, p)]).collect())
        .collect();
    let mut at: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    for p in 0..n {
        if let [v] = claimants[p][..] {
            if !used[v] {
                at[p] = Some(v);
                used[v] = true;
            }
        }
    }
    for p in 0..n {
        if at[p].is_none() && claimants[p].len() > 1 {
            if let Some(&v) = claimants[p].iter().find(|&&v| !used[v]) {
                at[p] = Some(v);
                used[v] = true;
            }
        }
    }
    for p in 0..n {
        if at[p].is_some() {
            continue;
        }
        let prev = at[(p + n - 1) % n];
        let next = at[(p + 1) % n];
        let added = |v: usize| {
            prev.map_or(0.0, |u| meta.distances[u][v]) + next.map_or(0.0, |w| meta.distances[v][w])
        };
        let v = (0..n)
            .filter(|&v| !used[v])
            .min_by(|&x, &y| added(x).total_cmp(&added(y)).then(x.cmp(&y)))
            .expect("an unused vertex remains for every empty position");
        at[p] = Some(v);
        used[v] = true;
    }
    at.into_iter().map(|v| v.expect("filled")).collect()
}
