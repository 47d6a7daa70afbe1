use std::collections::BTreeMap;

use crate::{Qubo, QuboError, Result};

/// A problem over the variables that survived fixing, together with the
/// bookkeeping needed to map its solutions back to the original problem.
///
/// `index_map[k]` is the original index of local variable `k`; the domains of
/// `index_map` and `fixed` partition the original variable range, and the
/// offset of `qubo` carries every contribution of the fixed variables.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedQubo {
    qubo: Qubo,
    index_map: Vec<usize>,
    fixed: BTreeMap<usize, bool>,
}

impl ReducedQubo {
    /// Nothing fixed yet.
    pub fn identity(qubo: Qubo) -> Self {
        let index_map = (0..qubo.num_vars()).collect();
        Self {
            qubo,
            index_map,
            fixed: BTreeMap::new(),
        }
    }

    pub(crate) fn from_parts(qubo: Qubo, index_map: Vec<usize>, fixed: BTreeMap<usize, bool>) -> Self {
        debug_assert_eq!(qubo.num_vars(), index_map.len());
        Self {
            qubo,
            index_map,
            fixed,
        }
    }

    pub fn qubo(&self) -> &Qubo {
        &self.qubo
    }

    pub fn into_qubo(self) -> Qubo {
        self.qubo
    }

    pub fn index_map(&self) -> &[usize] {
        &self.index_map
    }

    pub fn fixed(&self) -> &BTreeMap<usize, bool> {
        &self.fixed
    }

    pub fn original_num_vars(&self) -> usize {
        self.index_map.len() + self.fixed.len()
    }

    /// Fix several local variables at once. Indices refer to the current
    /// local numbering; the result is renumbered densely in original order.
    pub fn fix(&self, assignments: &[(usize, bool)]) -> Result<ReducedQubo> {
        let n = self.qubo.num_vars();
        let mut keep = vec![true; n];
        let mut values = vec![false; n];
        for &(local, v) in assignments {
            if local >= n {
                return Err(QuboError::invalid(format!(
                    "local variable {local} out of range for {n} variables"
                )));
            }
            if !keep[local] {
                return Err(QuboError::invalid(format!("local variable {local} fixed twice")));
            }
            keep[local] = false;
            values[local] = v;
        }
        let (qubo, local_map) = self.qubo.restrict(&keep, &values);
        let index_map = local_map.iter().map(|&k| self.index_map[k]).collect();
        let mut fixed = self.fixed.clone();
        for &(local, v) in assignments {
            fixed.insert(self.index_map[local], v);
        }
        Ok(ReducedQubo {
            qubo,
            index_map,
            fixed,
        })
    }

    /// Full assignment in original numbering: fixed values plus `local_bits`.
    pub fn lift(&self, local_bits: &[bool]) -> Result<Vec<bool>> {
        if local_bits.len() != self.index_map.len() {
            return Err(QuboError::invalid(format!(
                "expected {} local bits, got {}",
                self.index_map.len(),
                local_bits.len()
            )));
        }
        let mut bits = vec![false; self.original_num_vars()];
        for (&i, &v) in &self.fixed {
            bits[i] = v;
        }
        for (&i, &v) in self.index_map.iter().zip(local_bits) {
            bits[i] = v;
        }
        Ok(bits)
    }

    /// Restriction of a full assignment to the surviving variables.
    pub fn project(&self, full_bits: &[bool]) -> Vec<bool> {
        self.index_map.iter().map(|&i| full_bits[i]).collect()
    }
}
