//! Sub-constellation assignment as a weighted k-clique.
//!
//! Nodes are candidate satellite subsets with a coverage weight; two nodes are
//! adjacent when they share no satellite. With `P` the penalty, the energy is
//!
//! ```text
//! -sum w_v x_v + P * sum_{non-adjacent u<v} x_u x_v + P * (sum x_v - k)^2
//! ```
//!
//! which expands to a bias of `P (1 - 2k) - w_v`, a coupling of `2P` on
//! adjacent pairs and `3P` on overlapping pairs, and an offset of `P k^2`.

use itertools::Itertools;
use qdecomp_core::QuboBuilder;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{invalid, ProblemError, ProblemInstance, ProblemMeta, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ScaParams {
    pub n_satellites: usize,
    pub allowed_sizes: Vec<usize>,
    pub k: usize,
    /// Candidates with coverage below this percentile are discarded.
    pub threshold_percentile: f64,
}

impl Default for ScaParams {
    fn default() -> Self {
        Self {
            n_satellites: 12,
            allowed_sizes: vec![3, 4, 5],
            k: 3,
            threshold_percentile: 99.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaNode {
    /// Sorted satellite indices.
    pub satellites: Vec<usize>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaMeta {
    pub nodes: Vec<ScaNode>,
    pub k: usize,
    pub n_satellites: usize,
    pub penalty: f64,
}

fn disjoint(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

impl ScaMeta {
    /// Checks the node sets and sets the penalty to `1 + sum of the k largest
    /// weights`.
    pub fn new(mut nodes: Vec<ScaNode>, k: usize, n_satellites: usize) -> Result<Self> {
        if k < 2 {
            return Err(invalid(format!("k must be at least 2, got {k}")));
        }
        for (i, node) in nodes.iter_mut().enumerate() {
            node.satellites.sort_unstable();
            node.satellites.dedup();
            if node.satellites.iter().any(|&s| s >= n_satellites) {
                return Err(invalid(format!("node {i} names a satellite outside 0..{n_satellites}")));
            }
            if !(node.weight.is_finite() && node.weight >= 0.0) {
                return Err(invalid(format!("node {i} has weight {}", node.weight)));
            }
        }
        if nodes.len() < k {
            return Err(ProblemError::InfeasibleInstance(format!(
                "{} candidate nodes cannot form a {k}-clique",
                nodes.len()
            )));
        }
        let mut weights: Vec<f64> = nodes.iter().map(|n| n.weight).collect();
        weights.sort_by(|a, b| b.total_cmp(a));
        let penalty = 1.0 + weights[..k].iter().sum::<f64>();
        Ok(Self {
            nodes,
            k,
            n_satellites,
            penalty,
        })
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && disjoint(&self.nodes[i].satellites, &self.nodes[j].satellites)
    }

    /// Summed weight of the selected nodes.
    pub fn coverage(&self, selection: &[bool]) -> f64 {
        selection
            .iter()
            .zip(&self.nodes)
            .filter(|(&s, _)| s)
            .map(|(_, n)| n.weight)
            .sum()
    }
}

pub fn gen_sca(params: &ScaParams, seed: u64) -> Result<ProblemInstance> {
    if params.allowed_sizes.is_empty() {
        return Err(invalid("allowed_sizes is empty"));
    }
    let p = params.threshold_percentile;
    if !(0.0..100.0).contains(&p) {
        return Err(invalid(format!("threshold percentile {p} outside [0, 100)")));
    }
    if params.k < 2 {
        return Err(invalid(format!("k must be at least 2, got {}", params.k)));
    }
    let mut sizes = params.allowed_sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = Vec::new();
    for &size in &sizes {
        for satellites in (0..params.n_satellites).combinations(size) {
            let weight = rng.gen::<f64>();
            nodes.push(ScaNode { satellites, weight });
        }
    }
    if !nodes.is_empty() {
        let mut sorted: Vec<f64> = nodes.iter().map(|n| n.weight).collect();
        sorted.sort_by(f64::total_cmp);
        let cut = sorted[((p * sorted.len() as f64 / 100.0).floor() as usize).min(sorted.len() - 1)];
        nodes.retain(|n| n.weight >= cut);
    }
    let meta = ScaMeta::new(nodes, params.k, params.n_satellites)?;
    sca_to_qubo(meta, seed)
}

pub fn sca_to_qubo(meta: ScaMeta, seed: u64) -> Result<ProblemInstance> {
    let n = meta.nodes.len();
    let p = meta.penalty;
    let k = meta.k as f64;
    let mut b = QuboBuilder::new(n);
    b.add_offset(p * k * k);
    for (i, node) in meta.nodes.iter().enumerate() {
        b.add_linear(i, p * (1.0 - 2.0 * k) - node.weight);
        for j in i + 1..n {
            let c = if meta.adjacent(i, j) { 2.0 * p } else { 3.0 * p };
            b.add_quadratic(i, j, c);
        }
    }
    Ok(ProblemInstance {
        qubo: b.build(),
        meta: ProblemMeta::Sca(meta),
        seed,
    })
}

/// Selected overlapping pairs plus the distance of the selection size from k.
pub fn count_broken(meta: &ScaMeta, bits: &[bool]) -> usize {
    let selected: Vec<usize> = (0..bits.len()).filter(|&i| bits[i]).collect();
    let clashes = selected
        .iter()
        .tuple_combinations()
        .filter(|&(&i, &j)| !meta.adjacent(i, j))
        .count();
    clashes + selected.len().abs_diff(meta.k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaRepair {
    pub selection: Vec<bool>,
    /// No k-clique could be reached from the repaired clique.
    pub shortfall: bool,
}

/// Drop the lightest node in a clash until the selection is a clique, then
/// drop the lightest or add the heaviest compatible node until it has k
/// members. Ties go to the lower index.
pub fn repair(meta: &ScaMeta, bits: &[bool]) -> ScaRepair {
    let n = meta.nodes.len();
    let w = |i: usize| meta.nodes[i].weight;
    let lighter = |a: &usize, b: &usize| w(*a).total_cmp(&w(*b)).then(a.cmp(b));
    let mut sel = bits.to_vec();
    loop {
        let chosen: Vec<usize> = (0..n).filter(|&i| sel[i]).collect();
        let victim = chosen
            .iter()
            .copied()
            .filter(|&i| chosen.iter().any(|&j| j != i && !meta.adjacent(i, j)))
            .min_by(lighter);
        match victim {
            Some(i) => sel[i] = false,
            None => break,
        }
    }
    let mut count = sel.iter().filter(|&&s| s).count();
    while count > meta.k {
        let i = (0..n).filter(|&i| sel[i]).min_by(lighter).expect("count > k > 0");
        sel[i] = false;
        count -= 1;
    }
    while count < meta.k {
        let best = (0..n)
            .filter(|&i| !sel[i] && (0..n).all(|j| !sel[j] || meta.adjacent(i, j)))
            .max_by(|a, b| w(*a).total_cmp(&w(*b)).then(b.cmp(a)));
        match best {
            Some(i) => {
                sel[i] = true;
                count += 1;
            }
            None => break,
        }
    }
    ScaRepair {
        shortfall: count != meta.k,
        selection: sel,
    }
}
