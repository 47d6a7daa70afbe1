use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;
use std::time::{Duration, Instant};

use qdecomp_core::Qubo;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chimera::SHORE;
use crate::{Chimera, Embedding};

const NONE: usize = usize::MAX;
const UNREACHED: u64 = u64::MAX / 4;
// keeps path sums far below UNREACHED
const MAX_WEIGHT: u64 = 1 << 32;

/// Heuristic embedding gave up after `attempts` restarts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedFailure {
    pub attempts: usize,
    pub elapsed: Duration,
}

impl fmt::Display for EmbedFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "no embedding found after {} attempts ({:.3}s)",
            self.attempts,
            self.elapsed.as_secs_f64()
        )
    }
}

impl std::error::Error for EmbedFailure {}

/// Adjacency lists of the coupling graph of `qubo`.
pub fn logical_graph(qubo: &Qubo) -> Vec<Vec<usize>> {
    (0..qubo.num_vars())
        .map(|i| qubo.neighbors(i).iter().map(|&(j, _)| j).collect())
        .collect()
}

/// Randomized chain growth with restarts.
///
/// Each attempt visits the variables in a random breadth-first order. A
/// variable is rooted at the qubit with the smallest summed path cost to its
/// placed neighbors' chains, and its chain then grows from that root along
/// cheapest paths until it touches each of those chains. Chains may share
/// qubits, but a qubit already used `k` times costs `penalty^k`; refinement
/// passes tear up and re-route every chain with a rising penalty until no
/// qubit is shared. A qubit that is still shared at the end of a pass also
/// gets a permanent surcharge, so crowded spots grow expensive for every chain
/// and not only for whichever is re-routed last. An attempt whose overlap
/// count stops falling is abandoned and a new random order is tried, up to
/// `effort` attempts.
///
/// Attempts are confined to the top-left `s x s` cells of the grid. The first
/// uses the smallest `s` whose clique minor holds every variable plus
/// two spare cells, and each retry widens it by one cell up to the whole chip.
pub fn heuristic_embed(
    graph: &[Vec<usize>],
    topo: &Chimera,
    effort: usize,
    seed: u64,
) -> Result<Embedding, EmbedFailure> {
    let start = Instant::now();
    let edges: Vec<(usize, usize)> = graph
        .iter()
        .enumerate()
        .flat_map(|(i, ns)| ns.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let smallest = graph.len().saturating_sub(1).div_ceil(SHORE).max(1);
    for a in 0..effort {
        let side = (smallest + REGION_SLACK + a).min(topo.m());
        if let Some(chains) = Router::new(graph, topo, side).attempt(&mut rng) {
            let emb = Embedding::new(chains);
            if emb.validate(topo, &edges).is_ok() {
                return Ok(emb);
            }
        }
    }
    Err(EmbedFailure {
        attempts: effort,
        elapsed: start.elapsed(),
    })
}

const MAX_PASSES: usize = 32;
const PATIENCE: usize = 8;
/// Surcharge added to a qubit's history each pass it ends up shared.
const HISTORY_STEP: u64 = 4;
/// Extra cells beyond the clique-minor minimum for the first attempt.
const REGION_SLACK: usize = 2;

struct Router<'a> {
    graph: &'a [Vec<usize>],
    topo: &'a Chimera,
    /// Qubits inside the attempt's region.
    allowed: Vec<bool>,
    usage: Vec<u32>,
    /// `penalty^usage` per qubit, kept in step with `usage`.
    weights: Vec<u64>,
    history: Vec<u64>,
    chains: Vec<Vec<usize>>,
    penalty: u64,
    heap: BinaryHeap<Reverse<(u64, usize)>>,
    reach: Vec<Vec<u64>>,
}

impl<'a> Router<'a> {
    fn new(graph: &'a [Vec<usize>], topo: &'a Chimera, side: usize) -> Self {
        Self {
            graph,
            topo,
            allowed: (0..topo.num_qubits())
                .map(|q| {
                    let c = topo.coord(q);
                    c.row < side && c.col < side
                })
                .collect(),
            usage: vec![0; topo.num_qubits()],
            weights: vec![1; topo.num_qubits()],
            history: vec![0; topo.num_qubits()],
            chains: vec![Vec::new(); graph.len()],
            penalty: 2,
            heap: BinaryHeap::new(),
            reach: Vec::new(),
        }
    }

    fn overlaps(&self) -> usize {
        self.usage.iter().filter(|&&u| u > 1).count()
    }

    fn attempt(mut self, rng: &mut ChaCha8Rng) -> Option<Vec<Vec<usize>>> {
        if self.graph.len() > self.allowed.iter().filter(|&&a| a).count() {
            return None;
        }
        let mut order = visit_order(self.graph, rng);
        for &v in &order {
            self.route(v, rng)?;
        }
        let cap = self.topo.num_qubits() as u64;
        let mut best = usize::MAX;
        let mut stale = 0;
        for _ in 0..MAX_PASSES {
            let current = self.overlaps();
            if current == 0 {
                return Some(self.chains);
            }
            if current < best {
                best = current;
                stale = 0;
            } else {
                stale += 1;
                if stale >= PATIENCE {
                    return None;
                }
            }
            for q in 0..self.usage.len() {
                if self.usage[q] > 1 {
                    self.history[q] += HISTORY_STEP;
                }
            }
            self.penalty = (self.penalty * 2).min(cap);
            for q in 0..self.usage.len() {
                self.reweigh(q);
            }
            order.shuffle(rng);
            for &v in &order {
                for q in std::mem::take(&mut self.chains[v]) {
                    self.usage[q] -= 1;
                    self.reweigh(q);
                }
                self.route(v, rng)?;
            }
        }
        (self.overlaps() == 0).then_some(self.chains)
    }

    fn weight(&self, q: usize) -> u64 {
        self.weights[q]
    }

    fn reweigh(&mut self, q: usize) {
        self.weights[q] = self
            .penalty
            .saturating_pow(self.usage[q])
            .saturating_mul(1 + self.history[q])
            .min(MAX_WEIGHT);
    }

    fn occupy(&mut self, q: usize) {
        self.usage[q] += 1;
        self.reweigh(q);
    }

    /// Place chain `v` given the current chains of its neighbors.
    fn route(&mut self, v: usize, rng: &mut ChaCha8Rng) -> Option<()> {
        let nq = self.topo.num_qubits();
        let placed: Vec<usize> = self.graph[v]
            .iter()
            .copied()
            .filter(|&u| !self.chains[u].is_empty())
            .collect();
        let mut chain = Vec::new();
        if placed.is_empty() {
            let least = (0..nq).filter(|&q| self.allowed[q]).map(|q| self.usage[q]).min()?;
            let candidates: Vec<usize> = (0..nq)
                .filter(|&q| self.allowed[q] && self.usage[q] == least)
                .collect();
            chain.push(*candidates.choose(rng)?);
        } else {
            let mut blocked = vec![false; nq];
            for &u in &placed {
                for &q in &self.chains[u] {
                    blocked[q] = true;
                }
            }
            let mut total = vec![0u64; nq];
            let mut reach = std::mem::take(&mut self.reach);
            reach.resize_with(reach.len().max(placed.len()), Vec::new);
            for (dist, &u) in reach.iter_mut().zip(&placed) {
                self.distances_from(u, dist);
                for q in 0..nq {
                    total[q] = total[q].saturating_add(dist[q]);
                }
            }
            // each distance includes the root's own weight; count it once
            let k = placed.len() as u64;
            let cost = |q: usize| total[q] - (k - 1) * self.weight(q);
            let min_cost = (0..nq)
                .filter(|&q| !blocked[q] && total[q] < UNREACHED)
                .map(cost)
                .min()?;
            let roots: Vec<usize> = (0..nq)
                .filter(|&q| !blocked[q] && total[q] < UNREACHED && cost(q) == min_cost)
                .collect();
            let root = *roots.choose(rng)?;
            chain.push(root);
            let mut by_distance: Vec<usize> = (0..placed.len()).collect();
            by_distance.sort_by_key(|&t| (reach[t][root], t));
            let extended = by_distance
                .into_iter()
                .try_for_each(|t| self.extend_towards(&mut chain, placed[t]));
            self.reach = reach;
            extended?;
        }
        for &q in &chain {
            self.occupy(q);
        }
        self.chains[v] = chain;
        // neighbors still to be placed, or still overlapping, need room next to v
        let pending = self.graph[v]
            .iter()
            .filter(|&&u| {
                self.chains[u].is_empty() || self.chains[u].iter().any(|&q| self.usage[q] > 1)
            })
            .count();
        self.grow_boundary(v, pending + 1);
        Some(())
    }

    /// Node-weighted path costs out of chain `u`: `dist[q]` sums the weights of
    /// `q` and every qubit between it and the chain.
    fn distances_from(&mut self, u: usize, dist: &mut Vec<u64>) {
        let nq = self.topo.num_qubits();
        dist.clear();
        dist.resize(nq, UNREACHED);
        let mut source = vec![false; nq];
        for &c in &self.chains[u] {
            source[c] = true;
        }
        for &c in &self.chains[u] {
            for &q in self.topo.neighbors(c) {
                let d = self.weight(q);
                if self.allowed[q] && !source[q] && d < dist[q] {
                    dist[q] = d;
                    self.heap.push(Reverse((d, q)));
                }
            }
        }
        while let Some(Reverse((d, q))) = self.heap.pop() {
            if d > dist[q] {
                continue;
            }
            for &r in self.topo.neighbors(q) {
                let nd = d + self.weight(r);
                if self.allowed[r] && !source[r] && nd < dist[r] {
                    dist[r] = nd;
                    self.heap.push(Reverse((nd, r)));
                }
            }
        }
    }

    /// Grow `chain` along the cheapest path until it touches chain `u`.
    fn extend_towards(&mut self, chain: &mut Vec<usize>, u: usize) -> Option<()> {
        let nq = self.topo.num_qubits();
        let mut target = vec![false; nq];
        let mut forbidden = vec![false; nq];
        for &c in &self.chains[u] {
            forbidden[c] = true;
            for &q in self.topo.neighbors(c) {
                target[q] = true;
            }
        }
        if chain.iter().any(|&q| target[q]) {
            return Some(());
        }
        let mut dist = vec![UNREACHED; nq];
        let mut parent = vec![NONE; nq];
        for &c in chain.iter() {
            dist[c] = 0;
            forbidden[c] = true;
            self.heap.push(Reverse((0, c)));
        }
        let mut hit = None;
        while let Some(Reverse((d, q))) = self.heap.pop() {
            if d > dist[q] {
                continue;
            }
            if target[q] && parent[q] != NONE {
                hit = Some(q);
                break;
            }
            for &r in self.topo.neighbors(q) {
                let nd = d + self.weight(r);
                if self.allowed[r] && !forbidden[r] && nd < dist[r] {
                    dist[r] = nd;
                    parent[r] = q;
                    self.heap.push(Reverse((nd, r)));
                }
            }
        }
        self.heap.clear();
        let mut q = hit?;
        while dist[q] != 0 {
            chain.push(q);
            q = parent[q];
        }
        Some(())
    }

    /// Extend chain `v` with free neighboring qubits until at least `want` free
    /// qubits touch it, so neighbors placed later have somewhere to land.
    /// Each step takes the candidate exposing the most new free qubits.
    fn grow_boundary(&mut self, v: usize, want: usize) {
        loop {
            let mut boundary: Vec<usize> = self.chains[v]
                .iter()
                .flat_map(|&q| self.topo.neighbors(q).iter().copied())
                .filter(|&q| self.allowed[q] && self.usage[q] == 0)
                .collect();
            boundary.sort_unstable();
            boundary.dedup();
            if boundary.len() >= want {
                return;
            }
            let gain = |q: usize| {
                self.topo
                    .neighbors(q)
                    .iter()
                    .filter(|&&r| self.allowed[r] && self.usage[r] == 0 && r != q && boundary.binary_search(&r).is_err())
                    .count()
            };
            let Some(best) = boundary
                .iter()
                .copied()
                .max_by_key(|&q| (gain(q), Reverse(q)))
            else {
                return;
            };
            if gain(best) == 0 {
                return;
            }
            self.occupy(best);
            self.chains[v].push(best);
        }
    }
}

fn visit_order(graph: &[Vec<usize>], rng: &mut impl Rng) -> Vec<usize> {
    let n = graph.len();
    let mut starts: Vec<usize> = (0..n).collect();
    starts.shuffle(rng);
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = graph[v].iter().copied().filter(|&u| !seen[u]).collect();
            next.shuffle(rng);
            for u in next {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|i| vec![(i + n - 1) % n, (i + 1) % n]).collect()
    }

    #[test]
    fn four_cycle_on_c16() {
        let topo = Chimera::c16();
        let e = heuristic_embed(&cycle(4), &topo, 1, 3).unwrap();
        assert_eq!(e.num_vars(), 4);
    }

    #[test]
    fn k66_fails_on_c16() {
        let topo = Chimera::c16();
        let k66: Vec<Vec<usize>> = (0..66).map(|i| (0..66).filter(|&j| j != i).collect()).collect();
        let failure = heuristic_embed(&k66, &topo, 5, 0).unwrap_err();
        assert_eq!(failure.attempts, 5);
    }

    #[test]
    fn isolated_vertices_get_single_qubits() {
        let topo = Chimera::new(2);
        let e = heuristic_embed(&vec![Vec::new(); 5], &topo, 1, 9).unwrap();
        assert!(e.chains().iter().all(|c| c.len() == 1));
    }

    #[test]
    fn same_seed_same_embedding() {
        let topo = Chimera::new(4);
        let g = cycle(9);
        assert_eq!(
            heuristic_embed(&g, &topo, 3, 42).unwrap(),
            heuristic_embed(&g, &topo, 3, 42).unwrap()
        );
    }
}
