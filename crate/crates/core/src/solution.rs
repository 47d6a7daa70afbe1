use crate::{Qubo, Result};

/// One bit per logical variable and the energy those bits evaluate to.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub bits: Vec<bool>,
    pub energy: f64,
}

impl Solution {
    /// Pair `bits` with their energy under `qubo`.
    pub fn evaluate(qubo: &Qubo, bits: Vec<bool>) -> Result<Self> {
        let energy = qubo.energy(&bits)?;
        Ok(Self { bits, energy })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Bits rendered as a `0`/`1` string, variable 0 first.
    pub fn bitstring(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}
