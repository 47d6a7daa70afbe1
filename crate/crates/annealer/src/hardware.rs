use std::collections::VecDeque;

use qdecomp_core::{Qubo, QuboBuilder, Solution};

use crate::{AnnealerError, Chimera, Embedding, Result};

/// A logical problem laid out on hardware qubits.
///
/// `qubo` is indexed by position in `qubits` (sorted hardware ids), and
/// `chains[v]` lists the local indices holding logical variable `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct HardwareQubo {
    pub qubits: Vec<usize>,
    pub qubo: Qubo,
    pub chains: Vec<Vec<usize>>,
}

/// `1 + max |coefficient|` of the logical problem.
pub fn auto_chain_strength(qubo: &Qubo) -> f64 {
    1.0 + qubo.max_abs_coefficient()
}

/// Build the hardware problem for `qubo` on the first `qubo.num_vars()` chains
/// of `emb`.
///
/// Each chain edge `(a, b)` of a BFS spanning tree (rooted at the chain's
/// lowest qubit) carries `s (x_a - x_b)^2 = s x_a + s x_b - 2 s x_a x_b`, which
/// is zero when the two qubits agree and `s` otherwise. With all chains intact
/// the hardware energy equals the logical energy.
pub fn embed_qubo(
    qubo: &Qubo,
    emb: &Embedding,
    topo: &Chimera,
    chain_strength: f64,
) -> Result<HardwareQubo> {
    let n = qubo.num_vars();
    if emb.num_vars() < n {
        return Err(AnnealerError::InvalidEmbedding(format!(
            "{} chains for {n} variables",
            emb.num_vars()
        )));
    }
    if !(chain_strength.is_finite() && chain_strength >= 0.0) {
        return Err(AnnealerError::InvalidArgument(format!(
            "chain strength {chain_strength}"
        )));
    }
    let nq = topo.num_qubits();
    let mut local = vec![usize::MAX; nq];
    let mut qubits: Vec<usize> = emb.chains()[..n].iter().flatten().copied().collect();
    qubits.sort_unstable();
    for (k, &q) in qubits.iter().enumerate() {
        if q >= nq {
            return Err(AnnealerError::InvalidEmbedding(format!("qubit {q} outside topology")));
        }
        if local[q] != usize::MAX {
            return Err(AnnealerError::InvalidEmbedding(format!("qubit {q} used twice")));
        }
        local[q] = k;
    }
    let owner = emb.owners(nq);
    let mut b = QuboBuilder::new(qubits.len());
    b.add_offset(qubo.offset());

    let mut chains = Vec::with_capacity(n);
    for v in 0..n {
        let chain = emb.chain(v);
        if chain.is_empty() {
            return Err(AnnealerError::InvalidEmbedding(format!("chain {v} is empty")));
        }
        let share = qubo.linear(v) / chain.len() as f64;
        for &q in chain {
            b.add_linear(local[q], share);
        }
        for (p, c) in spanning_tree(topo, &owner, chain, v)? {
            b.add_linear(local[p], chain_strength);
            b.add_linear(local[c], chain_strength);
            b.add_quadratic(local[p], local[c], -2.0 * chain_strength);
        }
        chains.push(chain.iter().map(|&q| local[q]).collect());
    }

    for c in qubo.couplings() {
        let edge = emb
            .chain(c.i)
            .iter()
            .flat_map(|&a| {
                topo.neighbors(a)
                    .iter()
                    .filter(|&&q| owner[q] == c.j)
                    .map(move |&q| (a.min(q), a.max(q)))
            })
            .min()
            .ok_or_else(|| {
                AnnealerError::InvalidEmbedding(format!(
                    "no hardware edge between chains {} and {}",
                    c.i, c.j
                ))
            })?;
        b.add_quadratic(local[edge.0], local[edge.1], c.value);
    }

    Ok(HardwareQubo {
        qubits,
        qubo: b.build(),
        chains,
    })
}

fn spanning_tree(
    topo: &Chimera,
    owner: &[usize],
    chain: &[usize],
    v: usize,
) -> Result<Vec<(usize, usize)>> {
    let mut seen = vec![chain[0]];
    let mut tree = Vec::with_capacity(chain.len() - 1);
    let mut queue = VecDeque::from([chain[0]]);
    while let Some(q) = queue.pop_front() {
        for &r in topo.neighbors(q) {
            if owner[r] == v && !seen.contains(&r) {
                seen.push(r);
                tree.push((q, r));
                queue.push_back(r);
            }
        }
    }
    if seen.len() != chain.len() {
        return Err(AnnealerError::InvalidEmbedding(format!("chain {v} is disconnected")));
    }
    Ok(tree)
}

/// Majority vote over each chain (ties go to 0), re-evaluated on `qubo`.
pub fn unembed(reads: &[Vec<bool>], hw: &HardwareQubo, qubo: &Qubo) -> Result<Vec<Solution>> {
    reads
        .iter()
        .map(|read| {
            if read.len() != hw.qubits.len() {
                return Err(AnnealerError::InvalidArgument(format!(
                    "read has {} bits, hardware problem has {}",
                    read.len(),
                    hw.qubits.len()
                )));
            }
            let bits = hw
                .chains
                .iter()
                .map(|chain| {
                    let ones = chain.iter().filter(|&&k| read[k]).count();
                    2 * ones > chain.len()
                })
                .collect();
            Ok(Solution::evaluate(qubo, bits)?)
        })
        .collect()
}

/// Number of chains whose qubits disagree in `read`.
pub fn broken_chains(read: &[bool], hw: &HardwareQubo) -> usize {
    hw.chains
        .iter()
        .filter(|chain| chain.iter().any(|&k| read[k] != read[chain[0]]))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_variable_unchanged() {
        let topo = Chimera::new(1);
        let mut b = QuboBuilder::new(1);
        b.add_linear(0, -2.5).add_offset(1.0);
        let q = b.build();
        let emb = Embedding::new(vec![vec![3]]);
        let hw = embed_qubo(&q, &emb, &topo, 7.0).unwrap();
        assert_eq!(hw.qubits, vec![3]);
        assert_eq!(hw.qubo, q);
    }

    #[test]
    fn two_singleton_chains_mirror_logical() {
        let topo = Chimera::new(1);
        let mut b = QuboBuilder::new(2);
        b.add_linear(0, 1.0).add_linear(1, -1.0).add_quadratic(0, 1, 2.0);
        let q = b.build();
        let emb = Embedding::new(vec![vec![0], vec![4]]);
        let hw = embed_qubo(&q, &emb, &topo, 3.0).unwrap();
        assert_eq!(hw.qubo, q);
    }

    #[test]
    fn majority_vote_and_tie_rule() {
        let hw = HardwareQubo {
            qubits: vec![0, 1, 2, 3, 4],
            qubo: Qubo::zero(5),
            chains: vec![vec![0, 1, 2], vec![3, 4]],
        };
        let logical = Qubo::zero(2);
        let out = unembed(&[vec![true, true, false, true, false]], &hw, &logical).unwrap();
        assert_eq!(out[0].bits, vec![true, false]);
        let agree = unembed(&[vec![true, true, true, false, false]], &hw, &logical).unwrap();
        assert_eq!(agree[0].bits, vec![true, false]);
        assert_eq!(broken_chains(&[true, true, false, true, false], &hw), 2);
    }

    #[test]
    fn missing_edge_is_invalid() {
        let topo = Chimera::new(1);
        let mut b = QuboBuilder::new(2);
        b.add_quadratic(0, 1, 1.0);
        // two side-0 qubits share no edge
        let emb = Embedding::new(vec![vec![0], vec![1]]);
        assert!(matches!(
            embed_qubo(&b.build(), &emb, &topo, 1.0),
            Err(AnnealerError::InvalidEmbedding(_))
        ));
    }
}
