//! Maintenance workload scheduling.
//!
//! A variable exists for every feasible `(repair, facility, start week)`
//! triple. The QUBO combines four weighted terms: each repair scheduled
//! exactly once (`w1`), no facility-week over its worker-hour capacity (`w2`,
//! charged pairwise on co-resident jobs whose joint hours exceed capacity),
//! repair plus shipping cost (`w3`), and the value of completed repairs
//! (`-w4`).

use qdecomp_core::QuboBuilder;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{invalid, ProblemError, ProblemInstance, ProblemMeta, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Repair {
    pub origin: usize,
    pub destination: usize,
    pub release: usize,
    pub due: usize,
    pub repair_type: usize,
    pub value: f64,
}

/// How a facility handles one repair type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepairSpec {
    /// Weeks the item stays at the facility.
    pub duration: usize,
    pub cost: f64,
    /// Worker-hours consumed in each week of the repair.
    pub hours: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Facility {
    pub capacity: f64,
    /// Indexed by repair type; `None` when the facility cannot do it.
    pub specs: Vec<Option<RepairSpec>>,
    /// Shipping time between this facility and each location, either way.
    pub ship_weeks: Vec<usize>,
    pub ship_cost: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintWeights {
    pub once: f64,
    pub capacity: f64,
    pub cost: f64,
    pub value: f64,
}

impl ConstraintWeights {
    /// `w1 = w2 = 10 * max value`, `w3 = w4 = 1`.
    pub fn default_for(repairs: &[Repair]) -> Self {
        let max = repairs.iter().map(|r| r.value).fold(0.0, f64::max);
        let big = if max > 0.0 { 10.0 * max } else { 1.0 };
        Self {
            once: big,
            capacity: big,
            cost: 1.0,
            value: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Slot {
    pub repair: usize,
    pub facility: usize,
    pub start: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MwpMeta {
    pub repairs: Vec<Repair>,
    pub facilities: Vec<Facility>,
    pub weeks: usize,
    /// Variable `i` schedules `variable_index[i]`.
    pub variable_index: Vec<Slot>,
    pub constraint_weights: ConstraintWeights,
}

impl MwpMeta {
    /// Enumerates the feasible triples in (repair, facility, week) order.
    pub fn new(
        repairs: Vec<Repair>,
        facilities: Vec<Facility>,
        weeks: usize,
        constraint_weights: ConstraintWeights,
    ) -> Result<Self> {
        for (j, f) in facilities.iter().enumerate() {
            if !(f.capacity.is_finite() && f.capacity >= 0.0) {
                return Err(invalid(format!("facility {j} capacity {}", f.capacity)));
            }
            if f.ship_weeks.len() != f.ship_cost.len() {
                return Err(invalid(format!("facility {j} shipping tables differ in length")));
            }
        }
        let mut index = Vec::new();
        for (r, rep) in repairs.iter().enumerate() {
            if rep.due > weeks {
                return Err(invalid(format!("repair {r} due week {} beyond horizon {weeks}", rep.due)));
            }
            let before = index.len();
            for (f, fac) in facilities.iter().enumerate() {
                let (Some(Some(spec)), Some(&ship_in), Some(&ship_out)) = (
                    fac.specs.get(rep.repair_type),
                    fac.ship_weeks.get(rep.origin),
                    fac.ship_weeks.get(rep.destination),
                ) else {
                    continue;
                };
                if spec.hours > fac.capacity {
                    continue;
                }
                for start in rep.release + ship_in..weeks {
                    if start + spec.duration <= weeks && start + spec.duration + ship_out <= rep.due {
                        index.push(Slot {
                            repair: r,
                            facility: f,
                            start,
                        });
                    }
                }
            }
            if index.len() == before {
                return Err(ProblemError::InfeasibleInstance(format!(
                    "repair {r} has no feasible facility and start week"
                )));
            }
        }
        Ok(Self {
            repairs,
            facilities,
            weeks,
            variable_index: index,
            constraint_weights,
        })
    }

    pub fn spec(&self, slot: Slot) -> RepairSpec {
        self.facilities[slot.facility].specs[self.repairs[slot.repair].repair_type].expect("indexed slots are capable")
    }

    /// Repair plus both shipping legs.
    pub fn cost(&self, slot: Slot) -> f64 {
        let rep = &self.repairs[slot.repair];
        let fac = &self.facilities[slot.facility];
        self.spec(slot).cost + fac.ship_cost[rep.origin] + fac.ship_cost[rep.destination]
    }

    /// Weeks the item occupies the facility.
    pub fn resident(&self, slot: Slot) -> std::ops::Range<usize> {
        slot.start..slot.start + self.spec(slot).duration
    }

    fn overlap(&self, a: Slot, b: Slot) -> usize {
        if a.facility != b.facility {
            return 0;
        }
        let (ra, rb) = (self.resident(a), self.resident(b));
        ra.end.min(rb.end).saturating_sub(ra.start.max(rb.start))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MwpParams {
    pub n_repairs: usize,
    pub n_facilities: usize,
    pub weeks: usize,
    pub n_locations: usize,
    pub n_repair_types: usize,
}

impl Default for MwpParams {
    fn default() -> Self {
        Self {
            n_repairs: 4,
            n_facilities: 2,
            weeks: 6,
            n_locations: 3,
            n_repair_types: 2,
        }
    }
}

/// Synthetic instance. Each repair's due week leaves its fastest capable
/// facility at most one week of slack, so every repair contributes at most
/// two start weeks per facility.
pub fn gen_mwp(params: &MwpParams, weights: Option<ConstraintWeights>, seed: u64) -> Result<ProblemInstance> {
    let MwpParams {
        n_repairs,
        n_facilities,
        weeks,
        n_locations,
        n_repair_types,
    } = *params;
    if n_facilities == 0 || n_locations == 0 || n_repair_types == 0 {
        return Err(invalid("MWP needs facilities, locations and repair types"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut facilities: Vec<Facility> = (0..n_facilities)
        .map(|_| Facility {
            capacity: rng.gen_range(30.0..40.0),
            specs: (0..n_repair_types)
                .map(|_| {
                    let spec = RepairSpec {
                        duration: rng.gen_range(1..=2),
                        cost: rng.gen_range(5.0..=20.0),
                        hours: rng.gen_range(20.0..=30.0),
                    };
                    rng.gen_bool(0.7).then_some(spec)
                })
                .collect(),
            ship_weeks: (0..n_locations).map(|_| rng.gen_range(0..=1)).collect(),
            ship_cost: (0..n_locations).map(|_| rng.gen_range(1.0..=5.0)).collect(),
        })
        .collect();
    for t in 0..n_repair_types {
        if facilities.iter().all(|f| f.specs[t].is_none()) {
            let f = rng.gen_range(0..n_facilities);
            facilities[f].specs[t] = Some(RepairSpec {
                duration: rng.gen_range(1..=2),
                cost: rng.gen_range(5.0..=20.0),
                hours: rng.gen_range(20.0..=30.0),
            });
        }
    }
    let mut repairs = Vec::with_capacity(n_repairs);
    for r in 0..n_repairs {
        let repair_type = rng.gen_range(0..n_repair_types);
        let origin = rng.gen_range(0..n_locations);
        let destination = rng.gen_range(0..n_locations);
        let fastest = facilities
            .iter()
            .filter_map(|f| f.specs[repair_type].map(|s| f.ship_weeks[origin] + s.duration + f.ship_weeks[destination]))
            .min()
            .expect("every type has a capable facility");
        if fastest > weeks {
            return Err(ProblemError::InfeasibleInstance(format!(
                "repair {r} needs {fastest} weeks, horizon is {weeks}"
            )));
        }
        let slack = rng.gen_range(0..=1).min(weeks - fastest);
        let release = rng.gen_range(0..=weeks - fastest - slack);
        repairs.push(Repair {
            origin,
            destination,
            release,
            due: release + fastest + slack,
            repair_type,
            value: rng.gen_range(50.0..=100.0),
        });
    }
    let weights = weights.unwrap_or_else(|| ConstraintWeights::default_for(&repairs));
    let meta = MwpMeta::new(repairs, facilities, weeks, weights)?;
    mwp_to_qubo(meta, seed)
}

pub fn mwp_to_qubo(meta: MwpMeta, seed: u64) -> Result<ProblemInstance> {
    let w = meta.constraint_weights;
    let slots = &meta.variable_index;
    let mut b = QuboBuilder::new(slots.len());
    b.add_offset(w.once * meta.repairs.len() as f64);
    for (i, &s) in slots.iter().enumerate() {
        b.add_linear(i, -w.once + w.cost * meta.cost(s) - w.value * meta.repairs[s.repair].value);
        for (j, &t) in slots.iter().enumerate().skip(i + 1) {
            if s.repair == t.repair {
                b.add_quadratic(i, j, 2.0 * w.once);
                continue;
            }
            let shared = meta.overlap(s, t);
            if shared > 0 && meta.spec(s).hours + meta.spec(t).hours > meta.facilities[s.facility].capacity {
                b.add_quadratic(i, j, w.capacity * shared as f64);
            }
        }
    }
    Ok(ProblemInstance {
        qubo: b.build(),
        meta: ProblemMeta::Mwp(meta),
        seed,
    })
}

/// Summed `value - cost` of repairs scheduled exactly once whose facility
/// stays within capacity in every week they occupy it.
pub fn quality(meta: &MwpMeta, bits: &[bool]) -> f64 {
    let slots = &meta.variable_index;
    let active: Vec<Slot> = slots.iter().zip(bits).filter(|(_, &b)| b).map(|(&s, _)| s).collect();
    let mut load = vec![vec![0.0; meta.weeks]; meta.facilities.len()];
    for &s in &active {
        for t in meta.resident(s) {
            load[s.facility][t] += meta.spec(s).hours;
        }
    }
    let mut total = 0.0;
    for r in 0..meta.repairs.len() {
        let mine: Vec<Slot> = active.iter().copied().filter(|s| s.repair == r).collect();
        let [s] = mine[..] else { continue };
        let cap = meta.facilities[s.facility].capacity;
        if meta.resident(s).all(|t| load[s.facility][t] <= cap) {
            total += meta.repairs[r].value - meta.cost(s);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn facility(capacity: f64, duration: usize, hours: f64) -> Facility {
        Facility {
            capacity,
            specs: vec![Some(RepairSpec {
                duration,
                cost: 10.0,
                hours,
            })],
            ship_weeks: vec![0],
            ship_cost: vec![1.0],
        }
    }

    fn repair(release: usize, due: usize) -> Repair {
        Repair {
            origin: 0,
            destination: 0,
            release,
            due,
            repair_type: 0,
            value: 60.0,
        }
    }

    #[test]
    fn single_slot_is_taken() {
        let repairs = vec![repair(0, 1)];
        let w = ConstraintWeights::default_for(&repairs);
        let meta = MwpMeta::new(repairs, vec![facility(40.0, 1, 25.0)], 1, w).unwrap();
        let inst = mwp_to_qubo(meta, 0).unwrap();
        assert_eq!(inst.num_vars(), 1);
        let on = inst.qubo.energy(&[true]).unwrap();
        let off = inst.qubo.energy(&[false]).unwrap();
        assert!(on < off);
    }

    #[test]
    fn shared_week_over_capacity_couples() {
        let repairs = vec![repair(0, 1), repair(0, 1)];
        let w = ConstraintWeights::default_for(&repairs);
        let meta = MwpMeta::new(repairs, vec![facility(40.0, 1, 25.0)], 1, w).unwrap();
        let inst = mwp_to_qubo(meta, 0).unwrap();
        assert_eq!(inst.num_vars(), 2);
        assert!(inst.qubo.coupling(0, 1) > 0.0);
    }

    #[test]
    fn quality_rules() {
        let repairs = vec![repair(0, 2), repair(0, 2)];
        let w = ConstraintWeights::default_for(&repairs);
        let meta = MwpMeta::new(repairs, vec![facility(60.0, 1, 25.0)], 2, w).unwrap();
        assert_eq!(meta.variable_index.len(), 4);
        assert_eq!(quality(&meta, &[false; 4]), 0.0);
        // repair 0 twice, repair 1 once
        let q = quality(&meta, &[true, true, true, false]);
        assert_eq!(q, 60.0 - 12.0);
    }

    #[test]
    fn unreachable_due_date_is_infeasible() {
        let repairs = vec![repair(1, 1)];
        let w = ConstraintWeights::default_for(&repairs);
        let err = MwpMeta::new(repairs, vec![facility(40.0, 1, 25.0)], 2, w);
        assert!(matches!(err, Err(ProblemError::InfeasibleInstance(_))));
    }

    #[test]
    fn synthetic_instances_stay_small() {
        for seed in 0..50 {
            let inst = gen_mwp(&MwpParams::default(), None, seed).unwrap();
            assert!(inst.num_vars() <= 16, "seed {seed}: {} vars", inst.num_vars());
        }
    }
}
