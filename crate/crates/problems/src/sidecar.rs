//! `key = value` metadata document stored next to a QUBO text file.
//!
//! Lists are space separated. Floats use shortest round-trip formatting, so
//! `from_sidecar(q, &to_sidecar(&inst))` reproduces `inst` exactly.

use std::collections::BTreeMap;
use std::fmt::{Display, Write as _};
use std::str::FromStr;

use qdecomp_core::Qubo;

use crate::dbg::{DbgMeta, DbgParams, OptimizationType};
use crate::mwp::{ConstraintWeights, Facility, MwpMeta, Repair, RepairSpec};
use crate::sca::{ScaMeta, ScaNode};
use crate::tsp::TspMeta;
use crate::{ProblemError, ProblemInstance, ProblemKind, ProblemMeta, Result};

fn join<T: Display>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn to_sidecar(inst: &ProblemInstance) -> String {
    let mut out = String::new();
    let mut put = |k: &str, v: String| writeln!(out, "{k} = {v}").unwrap();
    put("kind", inst.kind().name().into());
    put("seed", inst.seed.to_string());
    match &inst.meta {
        ProblemMeta::Dbg(m) => {
            let p = &m.params;
            put("number_of_layers", p.number_of_layers.to_string());
            put("nodes_per_layer", p.nodes_per_layer.to_string());
            put("max_connectivity_range_layer", p.max_connectivity_range_layer.to_string());
            put("connectivity_probability", p.connectivity_probability.to_string());
            put("average_node_value", p.average_node_value.to_string());
            let ty = match p.optimization_type {
                OptimizationType::Constant => "constant",
                OptimizationType::Random => "random",
            };
            put("optimization_type", ty.into());
            put("award", join(&m.award));
        }
        ProblemMeta::Tsp(m) => {
            put("n", m.n.to_string());
            put("penalty_a", m.penalty_a.to_string());
            put("penalty_b", m.penalty_b.to_string());
            for (u, row) in m.distances.iter().enumerate() {
                put(&format!("distance.{u}"), join(row));
            }
        }
        ProblemMeta::Sca(m) => {
            put("k", m.k.to_string());
            put("n_satellites", m.n_satellites.to_string());
            put("nodes", m.nodes.len().to_string());
            for (i, node) in m.nodes.iter().enumerate() {
                put(&format!("node.{i}"), format!("{} | {}", node.weight, join(&node.satellites)));
            }
        }
        ProblemMeta::Mwp(m) => {
            let w = m.constraint_weights;
            put("weeks", m.weeks.to_string());
            put("weights", join(&[w.once, w.capacity, w.cost, w.value]));
            put("repairs", m.repairs.len().to_string());
            for (i, r) in m.repairs.iter().enumerate() {
                put(
                    &format!("repair.{i}"),
                    format!("{} {} {} {} {} {}", r.origin, r.destination, r.release, r.due, r.repair_type, r.value),
                );
            }
            put("facilities", m.facilities.len().to_string());
            for (j, f) in m.facilities.iter().enumerate() {
                put(&format!("facility.{j}.capacity"), f.capacity.to_string());
                put(&format!("facility.{j}.ship_weeks"), join(&f.ship_weeks));
                put(&format!("facility.{j}.ship_cost"), join(&f.ship_cost));
                let specs: Vec<String> = f
                    .specs
                    .iter()
                    .map(|s| match s {
                        Some(s) => format!("{}:{}:{}", s.duration, s.cost, s.hours),
                        None => "-".into(),
                    })
                    .collect();
                put(&format!("facility.{j}.specs"), specs.join(" "));
            }
        }
    }
    out
}

struct Doc(BTreeMap<String, (usize, String)>);

impl Doc {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(ProblemError::Parse {
                    line: idx + 1,
                    message: format!("expected `key = value`, got `{line}`"),
                });
            };
            if map.insert(k.trim().to_string(), (idx + 1, v.trim().to_string())).is_some() {
                return Err(ProblemError::Parse {
                    line: idx + 1,
                    message: format!("duplicate key `{}`", k.trim()),
                });
            }
        }
        Ok(Self(map))
    }

    fn raw(&self, key: &str) -> Result<(usize, &str)> {
        self.0
            .get(key)
            .map(|(l, v)| (*l, v.as_str()))
            .ok_or_else(|| ProblemError::Parse {
                line: 0,
                message: format!("missing key `{key}`"),
            })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<T> {
        let (line, v) = self.raw(key)?;
        parse_one(line, key, v)
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>> {
        let (line, v) = self.raw(key)?;
        v.split_whitespace().map(|t| parse_one(line, key, t)).collect()
    }
}

fn parse_one<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| ProblemError::Parse {
        line,
        message: format!("bad value `{v}` for `{key}`"),
    })
}

fn bad(line: usize, message: impl Into<String>) -> ProblemError {
    ProblemError::Parse {
        line,
        message: message.into(),
    }
}

pub fn from_sidecar(qubo: Qubo, text: &str) -> Result<ProblemInstance> {
    let doc = Doc::parse(text)?;
    let kind: ProblemKind = doc.raw("kind")?.1.parse()?;
    let seed: u64 = doc.get("seed")?;
    let meta = match kind {
        ProblemKind::Dbg => {
            let (line, ty) = doc.raw("optimization_type")?;
            let optimization_type = match ty {
                "constant" => OptimizationType::Constant,
                "random" => OptimizationType::Random,
                other => return Err(bad(line, format!("unknown optimization type `{other}`"))),
            };
            ProblemMeta::Dbg(DbgMeta {
                params: DbgParams {
                    number_of_layers: doc.get("number_of_layers")?,
                    nodes_per_layer: doc.get("nodes_per_layer")?,
                    max_connectivity_range_layer: doc.get("max_connectivity_range_layer")?,
                    connectivity_probability: doc.get("connectivity_probability")?,
                    average_node_value: doc.get("average_node_value")?,
                    optimization_type,
                },
                award: doc.list("award")?,
            })
        }
        ProblemKind::Tsp => {
            let n: usize = doc.get("n")?;
            let distances = (0..n)
                .map(|u| doc.list(&format!("distance.{u}")))
                .collect::<Result<Vec<Vec<f64>>>>()?;
            ProblemMeta::Tsp(TspMeta::new(distances, doc.get("penalty_a")?, doc.get("penalty_b")?)?)
        }
        ProblemKind::Sca => {
            let count: usize = doc.get("nodes")?;
            let mut nodes = Vec::with_capacity(count);
            for i in 0..count {
                let key = format!("node.{i}");
                let (line, v) = doc.raw(&key)?;
                let (w, sats) = v.split_once('|').ok_or_else(|| bad(line, "node needs `weight | satellites`"))?;
                nodes.push(ScaNode {
                    weight: parse_one(line, &key, w.trim())?,
                    satellites: sats
                        .split_whitespace()
                        .map(|t| parse_one(line, &key, t))
                        .collect::<Result<_>>()?,
                });
            }
            ProblemMeta::Sca(ScaMeta::new(nodes, doc.get("k")?, doc.get("n_satellites")?)?)
        }
        ProblemKind::Mwp => {
            let (wline, _) = doc.raw("weights")?;
            let w: Vec<f64> = doc.list("weights")?;
            let [once, capacity, cost, value] = w[..] else {
                return Err(bad(wline, "weights needs four values"));
            };
            let n_rep: usize = doc.get("repairs")?;
            let mut repairs = Vec::with_capacity(n_rep);
            for i in 0..n_rep {
                let key = format!("repair.{i}");
                let (line, v) = doc.raw(&key)?;
                let f: Vec<&str> = v.split_whitespace().collect();
                if f.len() != 6 {
                    return Err(bad(line, "repair needs six fields"));
                }
                repairs.push(Repair {
                    origin: parse_one(line, &key, f[0])?,
                    destination: parse_one(line, &key, f[1])?,
                    release: parse_one(line, &key, f[2])?,
                    due: parse_one(line, &key, f[3])?,
                    repair_type: parse_one(line, &key, f[4])?,
                    value: parse_one(line, &key, f[5])?,
                });
            }
            let n_fac: usize = doc.get("facilities")?;
            let mut facilities = Vec::with_capacity(n_fac);
            for j in 0..n_fac {
                let key = format!("facility.{j}.specs");
                let (line, v) = doc.raw(&key)?;
                let specs = v
                    .split_whitespace()
                    .map(|t| {
                        if t == "-" {
                            return Ok(None);
                        }
                        let p: Vec<&str> = t.split(':').collect();
                        if p.len() != 3 {
                            return Err(bad(line, format!("bad spec `{t}`")));
                        }
                        Ok(Some(RepairSpec {
                            duration: parse_one(line, &key, p[0])?,
                            cost: parse_one(line, &key, p[1])?,
                            hours: parse_one(line, &key, p[2])?,
                        }))
                    })
                    .collect::<Result<_>>()?;
                facilities.push(Facility {
                    capacity: doc.get(&format!("facility.{j}.capacity"))?,
                    specs,
                    ship_weeks: doc.list(&format!("facility.{j}.ship_weeks"))?,
                    ship_cost: doc.list(&format!("facility.{j}.ship_cost"))?,
                });
            }
            let weights = ConstraintWeights {
                once,
                capacity,
                cost,
                value,
            };
            ProblemMeta::Mwp(MwpMeta::new(repairs, facilities, doc.get("weeks")?, weights)?)
        }
    };
    let expected = match &meta {
        ProblemMeta::Dbg(m) => m.award.len(),
        ProblemMeta::Tsp(m) => m.n * m.n,
        ProblemMeta::Sca(m) => m.nodes.len(),
        ProblemMeta::Mwp(m) => m.variable_index.len(),
    };
    if qubo.num_vars() != expected {
        return Err(crate::invalid(format!(
            "QUBO has {} variables, metadata implies {expected}",
            qubo.num_vars()
        )));
    }
    Ok(ProblemInstance { qubo, meta, seed })
}

