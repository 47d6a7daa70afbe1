//! Line-oriented text form:
//!
//! ```text
//! N <num_vars> <offset>
//! L <i> <bias>
//! Q <i> <j> <coupling>
//! ```
//!
//! Numbers are written with Rust's shortest round-trip float formatting, so
//! `from_text(to_text(q)) == q` bit for bit. Blank lines and lines starting
//! with `#` are ignored on input.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::qubo::Coupling;
use crate::{Qubo, QuboError, Result};

impl Qubo {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "N {} {}", self.num_vars(), self.offset()).unwrap();
        for (i, a) in self.linear_terms() {
            writeln!(out, "L {i} {a}").unwrap();
        }
        for c in self.couplings() {
            writeln!(out, "Q {} {} {}", c.i, c.j, c.value).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Qubo> {
        let mut header: Option<(usize, f64)> = None;
        let mut linear = Vec::new();
        let mut seen_linear = HashSet::new();
        let mut couplings = Vec::new();
        let mut seen_pairs = HashSet::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let err = |message: String| QuboError::Parse {
                line: line_no,
                message,
            };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match (fields[0], &header) {
                ("N", None) => {
                    if fields.len() != 3 {
                        return Err(err("header must be `N <num_vars> <offset>`".into()));
                    }
                    let n = parse_index(fields[1]).map_err(err)?;
                    let offset = parse_real(fields[2]).map_err(err)?;
                    linear = vec![0.0; n];
                    header = Some((n, offset));
                }
                ("N", Some(_)) => return Err(err("duplicate header".into())),
                (_, None) => return Err(err("expected `N` header first".into())),
                ("L", Some((n, _))) => {
                    if fields.len() != 3 {
                        return Err(err("bias line must be `L <i> <bias>`".into()));
                    }
                    let i = parse_index(fields[1]).map_err(err)?;
                    let a = parse_real(fields[2]).map_err(err)?;
                    if i >= *n {
                        return Err(err(format!("index {i} out of range")));
                    }
                    if a == 0.0 {
                        return Err(err("zero coefficients are not stored".into()));
                    }
                    if !seen_linear.insert(i) {
                        return Err(err(format!("duplicate bias for {i}")));
                    }
                    linear[i] = a;
                }
                ("Q", Some((n, _))) => {
                    if fields.len() != 4 {
                        return Err(err("coupling line must be `Q <i> <j> <value>`".into()));
                    }
                    let i = parse_index(fields[1]).map_err(err)?;
                    let j = parse_index(fields[2]).map_err(err)?;
                    let v = parse_real(fields[3]).map_err(err)?;
                    if i >= *n || j >= *n {
                        return Err(err(format!("pair ({i}, {j}) out of range")));
                    }
                    if i == j {
                        return Err(err("diagonal couplings are not stored".into()));
                    }
                    if v == 0.0 {
                        return Err(err("zero coefficients are not stored".into()));
                    }
                    let key = (i.min(j), i.max(j));
                    if !seen_pairs.insert(key) {
                        return Err(err(format!("duplicate coupling ({}, {})", key.0, key.1)));
                    }
                    couplings.push(Coupling {
                        i: key.0,
                        j: key.1,
                        value: v,
                    });
                }
                (tag, Some(_)) => return Err(err(format!("unknown record `{tag}`"))),
            }
        }
        let (n, offset) = header.ok_or(QuboError::Parse {
            line: 0,
            message: "missing `N` header".into(),
        })?;
        couplings.sort_by_key(|c| (c.i, c.j));
        Ok(Qubo::from_canonical(n, linear, couplings, offset))
    }
}

fn parse_index(s: &str) -> Result<usize, String> {
    s.parse().map_err(|_| format!("`{s}` is not an index"))
}

fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(v)
}
