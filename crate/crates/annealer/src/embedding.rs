use std::collections::VecDeque;

use crate::chimera::SHORE;
use crate::{AnnealerError, Chimera, Result};

/// Chains of hardware qubits, one per logical variable. Each chain is kept
/// sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    chains: Vec<Vec<usize>>,
}

impl Embedding {
    pub fn new(mut chains: Vec<Vec<usize>>) -> Self {
        for chain in &mut chains {
            chain.sort_unstable();
            chain.dedup();
        }
        Self { chains }
    }

    pub fn num_vars(&self) -> usize {
        self.chains.len()
    }

    pub fn chain(&self, v: usize) -> &[usize] {
        &self.chains[v]
    }

    pub fn chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    pub fn num_qubits(&self) -> usize {
        self.chains.iter().map(Vec::len).sum()
    }

    pub fn max_chain_length(&self) -> usize {
        self.chains.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Owner of every hardware qubit, `usize::MAX` where unused.
    pub(crate) fn owners(&self, num_qubits: usize) -> Vec<usize> {
        let mut owner = vec![usize::MAX; num_qubits];
        for (v, chain) in self.chains.iter().enumerate() {
            for &q in chain {
                if q < num_qubits {
                    owner[q] = v;
                }
            }
        }
        owner
    }

    /// Check that chains are nonempty, pairwise disjoint, connected in `topo`,
    /// and that every logical edge `(i, j)` is realised by at least one
    /// hardware edge between `chain(i)` and `chain(j)`.
    pub fn validate(&self, topo: &Chimera, logical_edges: &[(usize, usize)]) -> Result<()> {
        let nq = topo.num_qubits();
        let mut owner = vec![usize::MAX; nq];
        for (v, chain) in self.chains.iter().enumerate() {
            if chain.is_empty() {
                return Err(AnnealerError::InvalidEmbedding(format!("chain {v} is empty")));
            }
            for &q in chain {
                if q >= nq {
                    return Err(AnnealerError::InvalidEmbedding(format!(
                        "chain {v} uses qubit {q} outside the topology"
                    )));
                }
                if owner[q] != usize::MAX {
                    return Err(AnnealerError::InvalidEmbedding(format!(
                        "qubit {q} shared by chains {} and {v}",
                        owner[q]
                    )));
                }
                owner[q] = v;
            }
        }
        for (v, chain) in self.chains.iter().enumerate() {
            let mut seen = vec![chain[0]];
            let mut queue = VecDeque::from([chain[0]]);
            while let Some(q) = queue.pop_front() {
                for &n in topo.neighbors(q) {
                    if owner[n] == v && !seen.contains(&n) {
                        seen.push(n);
                        queue.push_back(n);
                    }
                }
            }
            if seen.len() != chain.len() {
                return Err(AnnealerError::InvalidEmbedding(format!(
                    "chain {v} is disconnected"
                )));
            }
        }
        for &(i, j) in logical_edges {
            if i >= self.chains.len() || j >= self.chains.len() {
                return Err(AnnealerError::InvalidEmbedding(format!(
                    "logical edge ({i}, {j}) has no chain"
                )));
            }
            let covered = self.chains[i]
                .iter()
                .any(|&a| topo.neighbors(a).iter().any(|&b| owner[b] == j));
            if !covered {
                return Err(AnnealerError::InvalidEmbedding(format!(
                    "no hardware edge between chains {i} and {j}"
                )));
            }
        }
        Ok(())
    }
}

/// Deterministic embedding of the complete graph `K_n`.
///
/// Variables are packed into blocks of four on the smallest `g x g` corner of
/// the grid that holds them. Variable `4b + k` takes track `k` of column `b`
/// from row 0 down to row `b`, then track `k` of row `b` from column `b` to
/// column `g - 1`, giving chains of `g + 1` qubits. Blocks `b1 < b2` meet in
/// cell `(b1, b2)`; variables of one block meet in diagonal cell `(b, b)`.
///
/// `K_{4m+1}` needs one more chain than the corner construction offers. For
/// `m = 1` the last track is split into a vertical and a horizontal singleton.
/// For larger `m` the extra chain runs through the unused sub-diagonal cells
/// `(j + 1, j)`, whose vertical qubits touch the ends of block `j` and whose
/// horizontal qubits touch the starts of block `j + 1`; that chain is longer
/// than `m + 1`.
pub fn clique_embedding(n: usize, topo: &Chimera) -> Result<Embedding> {
    let m = topo.m();
    let capacity = topo.max_clique_size();
    if n > capacity {
        return Err(AnnealerError::CapacityExceeded {
            requested: n,
            capacity,
        });
    }
    if n == 0 {
        return Ok(Embedding::new(Vec::new()));
    }
    if n == 1 {
        return Ok(Embedding::new(vec![vec![0]]));
    }
    let g = n.div_ceil(SHORE);
    if g <= m {
        return Ok(Embedding::new(corner_chains(topo, g, n)));
    }
    // n == 4m + 1
    let mut chains = corner_chains(topo, m, SHORE * m);
    if m == 1 {
        chains[3] = vec![topo.qubit(0, 0, 0, 3)];
        chains.push(vec![topo.qubit(0, 0, 1, 3)]);
    } else {
        let mut extra = Vec::new();
        for j in 0..m - 1 {
            for k in 0..SHORE {
                extra.push(topo.qubit(j + 1, j, 0, k));
            }
            extra.push(topo.qubit(j + 1, j, 1, 0));
            if j + 2 < m {
                extra.push(topo.qubit(j + 2, j, 0, 0));
                extra.push(topo.qubit(j + 2, j, 1, 0));
            }
        }
        for k in 1..SHORE {
            extra.push(topo.qubit(m - 1, m - 2, 1, k));
        }
        chains.push(extra);
    }
    Ok(Embedding::new(chains))
}

fn corner_chains(topo: &Chimera, g: usize, n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|v| {
            let (b, k) = (v / SHORE, v % SHORE);
            let mut chain: Vec<usize> = (0..=b).map(|row| topo.qubit(row, b, 0, k)).collect();
            chain.extend((b..g).map(|col| topo.qubit(b, col, 1, k)));
            chain
        })
        .collect()
}

#[cfg(test)]
fn complete_edges(n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_variable_single_qubit() {
        let e = clique_embedding(1, &Chimera::new(2)).unwrap();
        assert_eq!(e.chains(), &[vec![0]]);
    }

    #[test]
    fn k65_on_c16() {
        let topo = Chimera::c16();
        let e = clique_embedding(65, &topo).unwrap();
        assert_eq!(e.num_vars(), 65);
        e.validate(&topo, &complete_edges(65)).unwrap();
        assert!(e.chains()[..64].iter().all(|c| c.len() == 17));
    }

    #[test]
    fn chains_stay_short_below_full_capacity() {
        for m in [2, 4, 16] {
            let topo = Chimera::new(m);
            for n in 1..=4 * m {
                let e = clique_embedding(n, &topo).unwrap();
                assert!(e.max_chain_length() <= m + 1, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn capacity_exceeded() {
        let topo = Chimera::new(2);
        assert!(matches!(
            clique_embedding(10, &topo),
            Err(AnnealerError::CapacityExceeded { requested: 10, capacity: 9 })
        ));
    }

    #[test]
    fn validator_catches_defects() {
        let topo = Chimera::new(1);
        let shared = Embedding::new(vec![vec![0, 4], vec![4]]);
        assert!(shared.validate(&topo, &[]).is_err());
        // two side-0 qubits of one cell are not adjacent
        let split = Embedding::new(vec![vec![0, 1]]);
        assert!(split.validate(&topo, &[]).is_err());
        // side-0 qubits never couple to each other
        let uncovered = Embedding::new(vec![vec![0], vec![1]]);
        assert!(uncovered.validate(&topo, &[(0, 1)]).is_err());
        let empty = Embedding::new(vec![vec![]]);
        assert!(empty.validate(&topo, &[]).is_err());
    }
}
