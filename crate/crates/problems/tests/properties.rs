use proptest::prelude::*;
use qdecomp_core::Qubo;
use qdecomp_problems::dbg::{gen_dbg, DbgParams, OptimizationType};
use qdecomp_problems::mwp::{gen_mwp, MwpParams};
use qdecomp_problems::sca::{self, gen_sca, ScaParams};
use qdecomp_problems::sidecar::{from_sidecar, to_sidecar};
use qdecomp_problems::tsp::{self, gen_tsp_random, tsp_to_qubo, TspMeta};
use qdecomp_problems::{ProblemError, ProblemInstance, ProblemMeta};

fn small_dbg(seed: u64, random: bool) -> ProblemInstance {
    gen_dbg(
        &DbgParams {
            number_of_layers: 4,
            nodes_per_layer: 5,
            max_connectivity_range_layer: 1,
            connectivity_probability: 0.4,
            average_node_value: 0.3,
            optimization_type: if random {
                OptimizationType::Random
            } else {
                OptimizationType::Constant
            },
        },
        seed,
    )
    .unwrap()
}

fn small_tsp(n: usize, seed: u64) -> ProblemInstance {
    let meta = TspMeta::with_default_penalties(gen_tsp_random(n, seed).unwrap()).unwrap();
    tsp_to_qubo(meta, seed).unwrap()
}

fn small_sca(seed: u64) -> ProblemInstance {
    gen_sca(
        &ScaParams {
            n_satellites: 7,
            allowed_sizes: vec![2, 3],
            k: 3,
            threshold_percentile: 50.0,
        },
        seed,
    )
    .unwrap()
}

fn round_trip(inst: &ProblemInstance) -> ProblemInstance {
    let q = Qubo::from_text(&inst.qubo.to_text()).unwrap();
    from_sidecar(q, &to_sidecar(inst)).unwrap()
}

#[test]
fn sidecar_round_trips_every_family() {
    let instances = [
        small_dbg(1, true),
        small_tsp(5, 2),
        small_sca(3),
        gen_mwp(&MwpParams::default(), None, 4).unwrap(),
    ];
    for inst in &instances {
        assert_eq!(&round_trip(inst), inst, "{}", inst.kind());
    }
}

#[test]
fn sidecar_rejects_mismatched_qubo() {
    let inst = small_tsp(4, 0);
    let err = from_sidecar(Qubo::zero(15), &to_sidecar(&inst));
    assert!(matches!(err, Err(ProblemError::InvalidArgument(_))));
    assert!(matches!(from_sidecar(Qubo::zero(1), "kind tsp"), Err(ProblemError::Parse { .. })));
}

#[test]
fn evaluate_wires_each_family() {
    let inst = small_tsp(4, 1);
    let ProblemMeta::Tsp(m) = &inst.meta else { unreachable!() };
    let tour = [2, 0, 3, 1];
    let ev = inst.evaluate(&m.tour_bits(&tour)).unwrap();
    assert_eq!(ev.broken, Some(0));
    assert_eq!(ev.quality, m.tour_length(&tour));

    let mwp = gen_mwp(&MwpParams::default(), None, 0).unwrap();
    let ev = mwp.evaluate(&vec![false; mwp.num_vars()]).unwrap();
    assert_eq!(ev.broken, None);
    assert_eq!(ev.quality, 0.0);

    assert!(inst.evaluate(&[true]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generators_are_deterministic(seed: u64) {
        prop_assert_eq!(small_dbg(seed, true), small_dbg(seed, true));
        prop_assert_eq!(small_tsp(5, seed), small_tsp(5, seed));
        prop_assert_eq!(small_sca(seed), small_sca(seed));
        let p = MwpParams::default();
        prop_assert_eq!(gen_mwp(&p, None, seed).unwrap(), gen_mwp(&p, None, seed).unwrap());
    }

    #[test]
    fn constant_awards_are_uniform(seed: u64) {
        let inst = small_dbg(seed, false);
        let ProblemMeta::Dbg(m) = &inst.meta else { unreachable!() };
        prop_assert!(m.award.iter().all(|&a| a == 0.3));
        for c in inst.qubo.couplings() {
            prop_assert!(c.j / 5 - c.i / 5 <= 1);
        }
    }

    #[test]
    fn dbg_repair_gives_independent_set(seed: u64, bits in proptest::collection::vec(any::<bool>(), 20)) {
        let inst = small_dbg(seed, true);
        let ev = inst.evaluate(&bits).unwrap();
        prop_assert_eq!(inst.count_broken(&ev.repaired).unwrap(), Some(0));
        for (r, b) in ev.repaired.iter().zip(&bits) {
            prop_assert!(!r | b);
        }
    }

    #[test]
    fn tsp_repair_is_total(seed: u64, bits in proptest::collection::vec(any::<bool>(), 25)) {
        let inst = small_tsp(5, seed);
        let ProblemMeta::Tsp(m) = &inst.meta else { unreachable!() };
        let tour = tsp::repair(m, &bits);
        let mut sorted = tour.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, vec![0, 1, 2, 3, 4]);
        let ev = inst.evaluate(&bits).unwrap();
        prop_assert_eq!(tsp::count_broken(m, &ev.repaired), 0);
    }

    #[test]
    fn sca_repair_is_total(seed: u64, mask: u64) {
        let inst = small_sca(seed);
        let ProblemMeta::Sca(m) = &inst.meta else { unreachable!() };
        let bits: Vec<bool> = (0..m.nodes.len()).map(|i| mask >> (i % 64) & 1 == 1).collect();
        let r = sca::repair(m, &bits);
        let chosen: Vec<usize> = (0..bits.len()).filter(|&i| r.selection[i]).collect();
        for (x, &a) in chosen.iter().enumerate() {
            for &b in &chosen[x + 1..] {
                prop_assert!(m.adjacent(a, b));
            }
        }
        prop_assert!(r.shortfall || chosen.len() == m.k);
        prop_assert!(chosen.len() <= m.k);
    }

    #[test]
    fn valid_tour_energy_is_its_length(seed: u64, perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle()) {
        let inst = small_tsp(6, seed);
        let ProblemMeta::Tsp(m) = &inst.meta else { unreachable!() };
        let e = inst.qubo.energy(&m.tour_bits(&perm)).unwrap();
        prop_assert!((e - m.tour_length(&perm)).abs() < 1e-9);
    }
}
