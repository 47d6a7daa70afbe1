use std::collections::BTreeMap;

use crate::{QuboError, ReducedQubo, Result};

/// A single quadratic term `value * q_i * q_j` with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// Accumulates coefficients before freezing them into a [`Qubo`].
///
/// Repeated additions to the same term are summed. A diagonal coupling
/// `(i, i)` is folded into the linear bias of `i` since `q_i^2 = q_i`.
/// Terms that sum to exactly zero are dropped by [`QuboBuilder::build`].
///
/// Index arguments are checked eagerly and panic when out of range: the
/// builder is fed by generators that own their indexing.
#[derive(Debug, Clone)]
pub struct QuboBuilder {
    num_vars: usize,
    linear: Vec<f64>,
    quadratic: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

impl QuboBuilder {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            linear: vec![0.0; num_vars],
            quadratic: BTreeMap::new(),
            offset: 0.0,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn add_linear(&mut self, i: usize, value: f64) -> &mut Self {
        assert!(i < self.num_vars, "linear index {i} out of range");
        self.linear[i] += value;
        self
    }

    pub fn add_quadratic(&mut self, i: usize, j: usize, value: f64) -> &mut Self {
        assert!(
            i < self.num_vars && j < self.num_vars,
            "coupling ({i}, {j}) out of range"
        );
        if i == j {
            return self.add_linear(i, value);
        }
        let key = if i < j { (i, j) } else { (j, i) };
        *self.quadratic.entry(key).or_insert(0.0) += value;
        self
    }

    pub fn add_offset(&mut self, value: f64) -> &mut Self {
        self.offset += value;
        self
    }

    pub fn build(self) -> Qubo {
        let couplings = self
            .quadratic
            .into_iter()
            .filter(|&(_, v)| v != 0.0)
            .map(|((i, j), value)| Coupling { i, j, value })
            .collect();
        Qubo::from_canonical(self.num_vars, self.linear, couplings, self.offset)
    }
}

/// Sparse symmetric quadratic binary objective.
///
/// Immutable once built. The adjacency lists are derived from the coupling
/// list and kept sorted by neighbour index.
#[derive(Debug, Clone, PartialEq)]
pub struct Qubo {
    num_vars: usize,
    linear: Vec<f64>,
    couplings: Vec<Coupling>,
    adjacency: Vec<Vec<(usize, f64)>>,
    offset: f64,
}

impl Qubo {
    /// Empty objective over `num_vars` variables with zero offset.
    pub fn zero(num_vars: usize) -> Self {
        QuboBuilder::new(num_vars).build()
    }

    /// `couplings` must be sorted by `(i, j)`, have `i < j`, no duplicates and
    /// no zero values.
    pub(crate) fn from_canonical(
        num_vars: usize,
        linear: Vec<f64>,
        couplings: Vec<Coupling>,
        offset: f64,
    ) -> Self {
        debug_assert_eq!(linear.len(), num_vars);
        debug_assert!(couplings.windows(2).all(|w| (w[0].i, w[0].j) < (w[1].i, w[1].j)));
        let mut adjacency = vec![Vec::new(); num_vars];
        for c in &couplings {
            debug_assert!(c.i < c.j && c.j < num_vars && c.value != 0.0);
            adjacency[c.i].push((c.j, c.value));
            adjacency[c.j].push((c.i, c.value));
        }
        for list in &mut adjacency {
            list.sort_unstable_by_key(|&(n, _)| n);
        }
        // Zero biases are "absent"; normalise -0.0 so equality is structural.
        let linear = linear
            .into_iter()
            .map(|a| if a == 0.0 { 0.0 } else { a })
            .collect();
        Self {
            num_vars,
            linear,
            couplings,
            adjacency,
            offset,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn linear(&self, i: usize) -> f64 {
        self.linear[i]
    }

    /// Dense bias vector; absent biases read as zero.
    pub fn linear_slice(&self) -> &[f64] {
        &self.linear
    }

    /// Nonzero biases in ascending index order.
    pub fn linear_terms(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.linear
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0.0)
            .map(|(i, &a)| (i, a))
    }

    /// Couplings sorted by `(i, j)`.
    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn num_couplings(&self) -> usize {
        self.couplings.len()
    }

    /// Coupling value between `i` and `j`, zero when absent.
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        if i == j || i >= self.num_vars || j >= self.num_vars {
            return 0.0;
        }
        let list = &self.adjacency[i];
        match list.binary_search_by_key(&j, |&(n, _)| n) {
            Ok(pos) => list[pos].1,
            Err(_) => 0.0,
        }
    }

    /// Neighbours of `i` with their coupling values, sorted by index.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// Largest absolute coefficient over biases and couplings.
    pub fn max_abs_coefficient(&self) -> f64 {
        let lin = self.linear.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        self.couplings
            .iter()
            .fold(lin, |m, c| m.max(c.value.abs()))
    }

    /// `offset + sum_i a_i q_i + sum_{i<j} b_ij q_i q_j`.
    pub fn energy(&self, bits: &[bool]) -> Result<f64> {
        if bits.len() != self.num_vars {
            return Err(QuboError::invalid(format!(
                "assignment has {} bits, qubo has {} variables",
                bits.len(),
                self.num_vars
            )));
        }
        Ok(self.energy_unchecked(bits))
    }

    /// Same as [`Qubo::energy`] but panics on a length mismatch.
    pub fn energy_unchecked(&self, bits: &[bool]) -> f64 {
        assert_eq!(bits.len(), self.num_vars, "assignment length mismatch");
        let mut e = self.offset;
        for (a, &q) in self.linear.iter().zip(bits) {
            if q {
                e += a;
            }
        }
        for c in &self.couplings {
            if bits[c.i] && bits[c.j] {
                e += c.value;
            }
        }
        e
    }

    /// Fix `q_i = value` and drop it from the problem.
    ///
    /// Remaining variables are renumbered densely in their original order.
    /// Fixing to one moves `a_i` into the offset and adds `b_ij` to every
    /// neighbour's bias; fixing to zero discards every term touching `i`.
    pub fn fix_variable(&self, i: usize, value: bool) -> Result<Qubo> {
        if i >= self.num_vars {
            return Err(QuboError::invalid(format!(
                "variable {i} out of range for {} variables",
                self.num_vars
            )));
        }
        let mut keep = vec![true; self.num_vars];
        keep[i] = false;
        let mut values = vec![false; self.num_vars];
        values[i] = value;
        Ok(self.restrict(&keep, &values).0)
    }

    /// Sub-problem over `subset` with every other variable fixed to its value
    /// in `context`.
    ///
    /// The returned problem is ordered like `subset` after sorting and
    /// deduplication, and satisfies
    /// `sub.energy(s) == self.energy(context with subset overwritten by s)`.
    pub fn clamp_subqubo(&self, subset: &[usize], context: &[bool]) -> Result<ReducedQubo> {
        if subset.is_empty() {
            return Err(QuboError::invalid("clamp subset is empty"));
        }
        if context.len() != self.num_vars {
            return Err(QuboError::invalid(format!(
                "context has {} bits, qubo has {} variables",
                context.len(),
                self.num_vars
            )));
        }
        let mut keep = vec![false; self.num_vars];
        for &i in subset {
            if i >= self.num_vars {
                return Err(QuboError::invalid(format!("subset index {i} out of range")));
            }
            keep[i] = true;
        }
        let (qubo, index_map) = self.restrict(&keep, context);
        let fixed = keep
            .iter()
            .enumerate()
            .filter(|(_, &k)| !k)
            .map(|(i, _)| (i, context[i]))
            .collect();
        Ok(ReducedQubo::from_parts(qubo, index_map, fixed))
    }

    /// Problem induced on `subset`: its biases and the couplings with both
    /// ends inside. Couplings leaving the subset are dropped rather than
    /// clamped and the offset is zero.
    pub fn induced(&self, subset: &[usize]) -> Result<Qubo> {
        let mut local = vec![usize::MAX; self.num_vars];
        for (k, &i) in subset.iter().enumerate() {
            if i >= self.num_vars {
                return Err(QuboError::invalid(format!("subset index {i} out of range")));
            }
            if local[i] != usize::MAX {
                return Err(QuboError::invalid(format!("subset index {i} repeated")));
            }
            local[i] = k;
        }
        let mut b = QuboBuilder::new(subset.len());
        for (k, &i) in subset.iter().enumerate() {
            b.add_linear(k, self.linear[i]);
            for &(j, v) in &self.adjacency[i] {
                let lj = local[j];
                if lj != usize::MAX && i < j {
                    b.add_quadratic(k, lj, v);
                }
            }
        }
        Ok(b.build())
    }

    /// Existing couplings over possible couplings, `|E| / (N (N - 1) / 2)`.
    pub fn edge_density(&self) -> Result<f64> {
        if self.num_vars < 2 {
            return Err(QuboError::invalid(
                "edge density needs at least two variables",
            ));
        }
        let n = self.num_vars as f64;
        Ok(self.couplings.len() as f64 / (n * (n - 1.0) / 2.0))
    }

    /// Indices coupled to `i`.
    pub fn adjacency(&self, i: usize) -> Result<Vec<usize>> {
        if i >= self.num_vars {
            return Err(QuboError::invalid(format!("variable {i} out of range")));
        }
        Ok(self.adjacency[i].iter().map(|&(j, _)| j).collect())
    }

    /// Variable of highest degree, lowest index on ties.
    pub fn max_degree_node(&self) -> Result<usize> {
        if self.num_vars == 0 {
            return Err(QuboError::EmptyGraph);
        }
        let mut best = 0;
        for i in 1..self.num_vars {
            if self.adjacency[i].len() > self.adjacency[best].len() {
                best = i;
            }
        }
        Ok(best)
    }

    /// Core of every fixing operation: variables with `keep[i] == false` are
    /// fixed to `values[i]`. Returns the reduced problem and the map from new
    /// index to old index.
    pub(crate) fn restrict(&self, keep: &[bool], values: &[bool]) -> (Qubo, Vec<usize>) {
        let mut new_index = vec![usize::MAX; self.num_vars];
        let mut index_map = Vec::new();
        for (i, &k) in keep.iter().enumerate() {
            if k {
                new_index[i] = index_map.len();
                index_map.push(i);
            }
        }
        let mut offset = self.offset;
        let mut linear: Vec<f64> = index_map.iter().map(|&i| self.linear[i]).collect();
        for (i, &k) in keep.iter().enumerate() {
            if !k && values[i] {
                offset += self.linear[i];
            }
        }
        let mut couplings = Vec::with_capacity(self.couplings.len());
        for c in &self.couplings {
            match (keep[c.i], keep[c.j]) {
                (true, true) => couplings.push(Coupling {
                    i: new_index[c.i],
                    j: new_index[c.j],
                    value: c.value,
                }),
                (true, false) => {
                    if values[c.j] {
                        linear[new_index[c.i]] += c.value;
                    }
                }
                (false, true) => {
                    if values[c.i] {
                        linear[new_index[c.j]] += c.value;
                    }
                }
                (false, false) => {
                    if values[c.i] && values[c.j] {
                        offset += c.value;
                    }
                }
            }
        }
        // Order-preserving renumbering keeps (i, j) sorted.
        (
            Qubo::from_canonical(index_map.len(), linear, couplings, offset),
            index_map,
        )
    }
}
