use std::fmt;
use std::str::FromStr;

use qdecomp_core::Qubo;

use crate::dbg::{self, DbgMeta};
use crate::mwp::{self, MwpMeta};
use crate::sca::{self, ScaMeta};
use crate::tsp::{self, TspMeta};
use crate::{invalid, ProblemError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemKind {
    Dbg,
    Tsp,
    Sca,
    Mwp,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 4] = [ProblemKind::Dbg, ProblemKind::Tsp, ProblemKind::Sca, ProblemKind::Mwp];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Dbg => "dbg",
            ProblemKind::Tsp => "tsp",
            ProblemKind::Sca => "sca",
            ProblemKind::Mwp => "mwp",
        }
    }

    /// Whether a larger quality value is better (false for tour length).
    pub fn higher_is_better(self) -> bool {
        !matches!(self, ProblemKind::Tsp)
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = ProblemError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dbg" => Ok(ProblemKind::Dbg),
            "tsp" => Ok(ProblemKind::Tsp),
            "sca" => Ok(ProblemKind::Sca),
            "mwp" => Ok(ProblemKind::Mwp),
            other => Err(invalid(format!("unknown problem kind `{other}`"))),
        }
    }
}

/// Decoder payload for each problem family.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemMeta {
    Dbg(DbgMeta),
    Tsp(TspMeta),
    Sca(ScaMeta),
    Mwp(MwpMeta),
}

impl ProblemMeta {
    pub fn kind(&self) -> ProblemKind {
        match self {
            ProblemMeta::Dbg(_) => ProblemKind::Dbg,
            ProblemMeta::Tsp(_) => ProblemKind::Tsp,
            ProblemMeta::Sca(_) => ProblemKind::Sca,
            ProblemMeta::Mwp(_) => ProblemKind::Mwp,
        }
    }
}

/// A generated QUBO together with what is needed to interpret its solutions.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub qubo: Qubo,
    pub meta: ProblemMeta,
    pub seed: u64,
}

/// Problem-level view of a raw solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// Broken constraints in the raw bits; `None` where the count is not
    /// defined (MWP).
    pub broken: Option<usize>,
    /// Quality of the repaired solution (or of the raw bits for MWP).
    pub quality: f64,
    pub repaired: Vec<bool>,
    /// Repair could not reach a fully feasible solution.
    pub shortfall: bool,
}

impl ProblemInstance {
    pub fn kind(&self) -> ProblemKind {
        self.meta.kind()
    }

    pub fn num_vars(&self) -> usize {
        self.qubo.num_vars()
    }

    fn check_len(&self, bits: &[bool]) -> Result<()> {
        if bits.len() != self.num_vars() {
            return Err(invalid(format!(
                "solution has {} bits, instance has {} variables",
                bits.len(),
                self.num_vars()
            )));
        }
        Ok(())
    }

    pub fn count_broken(&self, bits: &[bool]) -> Result<Option<usize>> {
        self.check_len(bits)?;
        Ok(match &self.meta {
            ProblemMeta::Dbg(m) => Some(dbg::count_broken(m, &self.qubo, bits)),
            ProblemMeta::Tsp(m) => Some(tsp::count_broken(m, bits)),
            ProblemMeta::Sca(m) => Some(sca::count_broken(m, bits)),
            ProblemMeta::Mwp(_) => None,
        })
    }

    /// Broken-constraint count, repair, and fixed quality in one call.
    pub fn evaluate(&self, bits: &[bool]) -> Result<Evaluation> {
        let broken = self.count_broken(bits)?;
        Ok(match &self.meta {
            ProblemMeta::Dbg(m) => {
                let repaired = dbg::repair(m, &self.qubo, bits);
                Evaluation {
                    broken,
                    quality: dbg::quality(m, &repaired),
                    repaired,
                    shortfall: false,
                }
            }
            ProblemMeta::Tsp(m) => {
                let tour = tsp::repair(m, bits);
                Evaluation {
                    broken,
                    quality: m.tour_length(&tour),
                    repaired: m.tour_bits(&tour),
                    shortfall: false,
                }
            }
            ProblemMeta::Sca(m) => {
                let r = sca::repair(m, bits);
                Evaluation {
                    broken,
                    quality: m.coverage(&r.selection),
                    repaired: r.selection,
                    shortfall: r.shortfall,
                }
            }
            ProblemMeta::Mwp(m) => Evaluation {
                broken,
                quality: mwp::quality(m, bits),
                repaired: bits.to_vec(),
                shortfall: false,
            },
        })
    }
}
