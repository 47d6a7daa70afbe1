//! Layered random graphs: every node carries an award (negative bias) and
//! every edge a unit conflict penalty, so low energy means a high-award set of
//! mutually unconnected nodes.

use qdecomp_core::{Qubo, QuboBuilder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{invalid, ProblemInstance, ProblemMeta, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizationType {
    Constant,
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DbgParams {
    pub number_of_layers: usize,
    pub nodes_per_layer: usize,
    pub max_connectivity_range_layer: usize,
    pub connectivity_probability: f64,
    pub average_node_value: f64,
    pub optimization_type: OptimizationType,
}

impl Default for DbgParams {
    fn default() -> Self {
        Self {
            number_of_layers: 25,
            nodes_per_layer: 20,
            max_connectivity_range_layer: 5,
            connectivity_probability: 0.1,
            average_node_value: 0.1,
            optimization_type: OptimizationType::Random,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DbgMeta {
    pub params: DbgParams,
    pub award: Vec<f64>,
}

impl DbgMeta {
    /// Layer of node `i`; nodes are numbered layer by layer.
    pub fn layer(&self, i: usize) -> usize {
        i / self.params.nodes_per_layer
    }
}

pub fn gen_dbg(params: &DbgParams, seed: u64) -> Result<ProblemInstance> {
    if params.number_of_layers == 0 || params.nodes_per_layer == 0 {
        return Err(invalid("DBG needs at least one layer and one node per layer"));
    }
    let p = params.connectivity_probability;
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("connectivity probability {p} outside [0, 1]")));
    }
    let avg = params.average_node_value;
    if !(avg.is_finite() && avg >= 0.0) {
        return Err(invalid(format!("average node value {avg}")));
    }
    let npl = params.nodes_per_layer;
    let n = params.number_of_layers * npl;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let award: Vec<f64> = match params.optimization_type {
        OptimizationType::Constant => vec![avg; n],
        OptimizationType::Random => (0..n).map(|_| rng.gen::<f64>() * 2.0 * avg).collect(),
    };
    let mut b = QuboBuilder::new(n);
    for (i, &a) in award.iter().enumerate() {
        b.add_linear(i, -a);
    }
    for i in 0..n {
        for j in i + 1..n {
            if (j / npl) - (i / npl) > params.max_connectivity_range_layer {
                break;
            }
            if rng.gen_bool(p) {
                b.add_quadratic(i, j, 1.0);
            }
        }
    }
    Ok(ProblemInstance {
        qubo: b.build(),
        meta: ProblemMeta::Dbg(DbgMeta {
            params: params.clone(),
            award,
        }),
        seed,
    })
}

/// Edges with both endpoints active.
pub fn count_broken(_meta: &DbgMeta, qubo: &Qubo, bits: &[bool]) -> usize {
    qubo.couplings().iter().filter(|c| bits[c.i] && bits[c.j]).count()
}

/// Drop conflicting nodes until the active set is independent: repeatedly
/// remove the active node with the most active neighbors (ties: lower award,
/// then lower index).
pub fn repair(meta: &DbgMeta, qubo: &Qubo, bits: &[bool]) -> Vec<bool> {
    let mut active = bits.to_vec();
    let mut conflicts: Vec<usize> = (0..active.len())
        .map(|i| {
            if active[i] {
                qubo.neighbors(i).iter().filter(|&&(j, _)| active[j]).count()
            } else {
                0
            }
        })
        .collect();
    loop {
        let worst = (0..active.len())
            .filter(|&i| active[i] && conflicts[i] > 0)
            .min_by(|&a, &b| {
                conflicts[b]
                    .cmp(&conflicts[a])
                    .then(meta.award[a].total_cmp(&meta.award[b]))
                    .then(a.cmp(&b))
            });
        let Some(i) = worst else { break };
        active[i] = false;
        conflicts[i] = 0;
        for &(j, _) in qubo.neighbors(i) {
            if active[j] {
                conflicts[j] -= 1;
            }
        }
    }
    active
}

/// Total award of the active nodes.
pub fn quality(meta: &DbgMeta, bits: &[bool]) -> f64 {
    bits.iter()
        .zip(&meta.award)
        .filter(|(&b, _)| b)
        .map(|(_, &a)| a)
        .sum()
}
