use std::sync::OnceLock;
use std::time::{Duration, Instant};

use qdecomp_core::{Qubo, Solution};

use crate::{
    auto_chain_strength, clique_embedding, embed_qubo, local_descent, sample, unembed, AnnealerError, Chimera,
    Embedding, Result,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChainStrength {
    Auto,
    Fixed(f64),
}

impl ChainStrength {
    pub fn resolve(self, qubo: &Qubo) -> f64 {
        match self {
            ChainStrength::Auto => auto_chain_strength(qubo),
            ChainStrength::Fixed(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubSolverBudget {
    pub max_clique_size: usize,
    pub num_reads: usize,
    pub anneal_sweeps: usize,
    pub chain_strength: ChainStrength,
    pub embed_effort: usize,
    /// Run single-flip descent on every unembedded read before picking the best.
    pub polish: bool,
    pub rng_seed: u64,
}

impl Default for SubSolverBudget {
    fn default() -> Self {
        Self {
            max_clique_size: 65,
            num_reads: 50,
            anneal_sweeps: 500,
            chain_strength: ChainStrength::Auto,
            embed_effort: 5,
            polish: true,
            rng_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubSolveOutcome {
    pub solution: Solution,
    pub embedding_time: Duration,
    pub quantum_time: Duration,
}

/// Size-limited sub-solver: clique-embeds, anneals, and unembeds.
///
/// Clique embeddings are built once per size and shared across calls (and
/// threads), so repeated sub-problems pay only the cheap mapping step.
#[derive(Debug)]
pub struct AnnealerBackend {
    topology: Chimera,
    budget: SubSolverBudget,
    cliques: Vec<OnceLock<Embedding>>,
}

impl AnnealerBackend {
    pub fn new(topology: Chimera, budget: SubSolverBudget) -> Result<Self> {
        if budget.max_clique_size > topology.max_clique_size() {
            return Err(AnnealerError::InvalidArgument(format!(
                "max_clique_size {} exceeds the topology limit {}",
                budget.max_clique_size,
                topology.max_clique_size()
            )));
        }
        if budget.num_reads == 0 {
            return Err(AnnealerError::InvalidArgument("num_reads must be positive".into()));
        }
        if let ChainStrength::Fixed(s) = budget.chain_strength {
            if !(s.is_finite() && s >= 0.0) {
                return Err(AnnealerError::InvalidArgument(format!("chain strength {s}")));
            }
        }
        let cliques = (0..=budget.max_clique_size).map(|_| OnceLock::new()).collect();
        Ok(Self {
            topology,
            budget,
            cliques,
        })
    }

    /// `C_16` with the given budget.
    pub fn c16(budget: SubSolverBudget) -> Result<Self> {
        Self::new(Chimera::c16(), budget)
    }

    pub fn topology(&self) -> &Chimera {
        &self.topology
    }

    pub fn budget(&self) -> &SubSolverBudget {
        &self.budget
    }

    pub fn capacity(&self) -> usize {
        self.budget.max_clique_size
    }

    /// Solve a sub-problem of at most `capacity()` variables on the cached
    /// clique embedding of its size.
    pub fn subsolve(&self, qubo: &Qubo, seed: u64) -> Result<SubSolveOutcome> {
        let n = qubo.num_vars();
        if n > self.capacity() {
            return Err(AnnealerError::CapacityExceeded {
                requested: n,
                capacity: self.capacity(),
            });
        }
        let start = Instant::now();
        let emb = match self.cliques[n].get() {
            Some(e) => e,
            None => {
                let e = clique_embedding(n, &self.topology)?;
                self.cliques[n].get_or_init(|| e)
            }
        };
        self.run(qubo, emb, seed, start)
    }

    /// Solve on a caller-supplied embedding (for sub-problems that are not
    /// cliques and may exceed `capacity()`).
    pub fn subsolve_with_embedding(
        &self,
        qubo: &Qubo,
        emb: &Embedding,
        seed: u64,
    ) -> Result<SubSolveOutcome> {
        self.run(qubo, emb, seed, Instant::now())
    }

    fn run(&self, qubo: &Qubo, emb: &Embedding, seed: u64, start: Instant) -> Result<SubSolveOutcome> {
        if qubo.num_vars() == 0 {
            return Ok(SubSolveOutcome {
                solution: Solution {
                    bits: Vec::new(),
                    energy: qubo.offset(),
                },
                embedding_time: start.elapsed(),
                quantum_time: Duration::ZERO,
            });
        }
        let strength = self.budget.chain_strength.resolve(qubo);
        let hw = embed_qubo(qubo, emb, &self.topology, strength)?;
        let embedding_time = start.elapsed();

        let t = Instant::now();
        let reads = sample(
            &hw.qubo,
            self.budget.num_reads,
            self.budget.anneal_sweeps,
            mix(self.budget.rng_seed, seed),
        );

        let bits: Vec<Vec<bool>> = reads.into_iter().map(|r| r.bits).collect();
        let mut solutions = unembed(&bits, &hw, qubo)?;
        if self.budget.polish {
            for s in &mut solutions {
                local_descent(qubo, &mut s.bits);
                s.energy = qubo.energy_unchecked(&s.bits);
            }
        }
        let quantum_time = t.elapsed();
        let solution = solutions
            .into_iter()
            .reduce(|best, s| if s.energy < best.energy { s } else { best })
            .expect("num_reads is positive");
        Ok(SubSolveOutcome {
            solution,
            embedding_time,
            quantum_time,
        })
    }
}

fn mix(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
