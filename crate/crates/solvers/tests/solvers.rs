use qdecomp_annealer::{exact_solve, AnnealerBackend, Chimera, SubSolverBudget};
use qdecomp_core::random::random_qubo;
use qdecomp_core::{Qubo, QuboBuilder};
use qdecomp_problems::dbg::{gen_dbg, DbgParams, OptimizationType};
use qdecomp_solvers::*;
use proptest::prelude::*;

fn c16() -> AnnealerBackend {
    AnnealerBackend::c16(SubSolverBudget::default()).unwrap()
}

/// Capacity 9 on `C_2`, so N = 16 problems must be decomposed.
fn c2() -> AnnealerBackend {
    AnnealerBackend::new(
        Chimera::new(2),
        SubSolverBudget {
            max_clique_size: 9,
            ..Default::default()
        },
    )
    .unwrap()
}

fn run(kind: SolverKind, q: &Qubo, backend: &AnnealerBackend, seed: u64) -> SolveReport {
    solve(&SolverSpec::default_for(kind), q, backend, SolveBudget::default(), seed).unwrap()
}

fn param<'a>(r: &'a SolveReport, name: &str) -> &'a str {
    &r.params.iter().find(|(k, _)| k == name).unwrap().1
}

fn complete(n: usize, seed: u64) -> Qubo {
    random_qubo(n, 1.0, seed)
}

#[test]
fn solver_names_round_trip() {
    for kind in SolverKind::ALL {
        assert_eq!(kind.name().parse::<SolverKind>().unwrap(), kind);
    }
    assert!("annealing".parse::<SolverKind>().is_err());
}

#[test]
fn random_on_empty_qubo_returns_offset() {
    let mut b = QuboBuilder::new(0);
    b.add_offset(2.5);
    let r = solve_random(&b.build(), 1);
    assert!(r.solution.bits.is_empty());
    assert_eq!(r.solution.energy, 2.5);
}

#[test]
fn random_bits_are_balanced() {
    let q = Qubo::zero(20_000);
    let ones = solve_random(&q, 3).solution.bits.iter().filter(|&&b| b).count();
    assert!((ones as f64 / 20_000.0 - 0.5).abs() < 0.02, "{ones}");
}

#[test]
fn every_solver_reports_consistently() {
    let backend = c2();
    for seed in 0..3 {
        let q = random_qubo(24, 0.3, seed);
        for kind in SolverKind::ALL {
            let r = run(kind, &q, &backend, seed);
            assert_eq!(r.solver, kind.name());
            assert_eq!(r.solution.bits.len(), 24);
            assert_eq!(r.solution.energy, q.energy(&r.solution.bits).unwrap(), "{kind}");
            assert_eq!(
                r.classical_time + r.embedding_time + r.quantum_time,
                r.total_time,
                "{kind}"
            );
            assert!(!r.timed_out);
            let again = run(kind, &q, &backend, seed);
            assert_eq!(r.without_timing(), again.without_timing(), "{kind} seed {seed}");
        }
    }
}

#[test]
fn zero_budget_times_out_with_full_assignment() {
    let backend = c2();
    let q = random_qubo(30, 0.3, 5);
    for kind in [SolverKind::Pcd, SolverKind::Fa, SolverKind::Qbsolv, SolverKind::Ich] {
        let r = solve(&SolverSpec::default_for(kind), &q, &backend, SolveBudget::seconds(0.0), 1).unwrap();
        assert!(r.timed_out, "{kind}");
        assert_eq!(r.solution.bits.len(), 30);
        assert_eq!(r.solution.energy, q.energy_unchecked(&r.solution.bits));
    }
}

#[test]
fn pcd_small_problem_is_one_part_and_optimal() {
    let backend = c16();
    for seed in 0..5 {
        let q = random_qubo(10, 0.4, seed);
        let r = run(SolverKind::Pcd, &q, &backend, seed);
        assert_eq!(param(&r, "parts"), "1");
        assert_eq!(r.solution.energy, exact_solve(&q).unwrap().energy, "seed {seed}");
    }
}

#[test]
fn pcd_splits_disjoint_cliques() {
    let backend = c2();
    for seed in 0..5 {
        let a = complete(5, 2 * seed);
        let b = complete(5, 2 * seed + 1);
        let mut builder = QuboBuilder::new(10);
        for (off, part) in [(0, &a), (5, &b)] {
            for i in 0..5 {
                builder.add_linear(off + i, part.linear(i));
            }
            for c in part.couplings() {
                builder.add_quadratic(off + c.i, off + c.j, c.value);
            }
        }
        let q = builder.build();
        let r = solve(
            &SolverSpec::Pcd(PcdParams::default()),
            &q,
            &backend,
            SolveBudget::default(),
            seed,
        )
        .unwrap();
        let want = exact_solve(&a).unwrap().energy + exact_solve(&b).unwrap().energy;
        assert_eq!(r.solution.energy, want, "seed {seed}");
        assert!(r.subproblems_solved >= 2);
    }
}

#[test]
fn pcd_beats_random_on_layered_graphs() {
    let backend = c16();
    let params = DbgParams {
        number_of_layers: 11,
        nodes_per_layer: 6,
        max_connectivity_range_layer: 1,
        connectivity_probability: 0.5,
        average_node_value: 0.1,
        optimization_type: OptimizationType::Random,
    };
    let (mut pcd, mut rnd) = (0.0, 0.0);
    for seed in 0..10 {
        let inst = gen_dbg(&params, seed).unwrap();
        pcd += run(SolverKind::Pcd, &inst.qubo, &backend, seed).solution.energy;
        rnd += solve_random(&inst.qubo, seed).solution.energy;
    }
    assert!(pcd <= rnd, "pcd {pcd} random {rnd}");
}

#[test]
fn fa_within_capacity_is_a_single_subsolve() {
    let backend = c16();
    let q = random_qubo(12, 0.5, 8);
    let r = run(SolverKind::Fa, &q, &backend, 8);
    let direct = backend.subsolve(&q, derive_seed(8, 0)).unwrap();
    assert_eq!(r.solution, direct.solution);
    assert_eq!(r.subproblems_solved, 1);
}

#[test]
fn fa_energy_matches_recompute_after_freezing() {
    let backend = c2();
    for seed in 0..10 {
        let q = random_qubo(16, 0.5, seed);
        let r = run(SolverKind::Fa, &q, &backend, seed);
        assert_eq!(r.subproblem_vars, 9);
        assert_eq!(r.solution.energy, q.energy_unchecked(&r.solution.bits));
    }
}

#[test]
fn fa_freezes_are_exact_over_all_completions() {
    let q = random_qubo(12, 0.6, 21);
    let pop: Vec<Vec<bool>> = (0..40u64)
        .map(|s| solve_random(&q, s).solution.bits)
        .collect();
    let scores = freeze_scores(&pop, FreezeWeighting::Normalize);
    let mut order: Vec<usize> = (0..12).collect();
    order.sort_by(|&a, &b| scores[b].1.total_cmp(&scores[a].1).then(a.cmp(&b)));
    let frozen: Vec<(usize, bool)> = order[..5].iter().map(|&i| (i, scores[i].0)).collect();
    let reduced = qdecomp_core::ReducedQubo::identity(q.clone()).fix(&frozen).unwrap();
    for mask in 0u32..1 << 7 {
        let local: Vec<bool> = (0..7).map(|k| mask >> k & 1 == 1).collect();
        let full = reduced.lift(&local).unwrap();
        assert_eq!(q.energy_unchecked(&full), reduced.qubo().energy_unchecked(&local));
    }
}

#[test]
fn qbsolv_is_exact_on_small_problems() {
    let backend = c16();
    let mut hits = 0;
    for seed in 0..60u64 {
        let n = 4 + (seed as usize % 13);
        let q = random_qubo(n, [0.1, 0.5, 1.0][seed as usize % 3], seed);
        let r = run(SolverKind::Qbsolv, &q, &backend, seed);
        hits += usize::from(r.solution.energy == exact_solve(&q).unwrap().energy);
    }
    assert!(hits >= 57, "{hits}/60");
}

#[test]
fn more_repeats_never_hurt() {
    let backend = c2();
    for seed in 0..3 {
        let q = random_qubo(60, 0.1, seed);
        let spec = |r| SolverSpec::Qbsolv(QbParams { num_repeats: r, ..Default::default() });
        let one = solve(&spec(1), &q, &backend, SolveBudget::default(), seed).unwrap();
        let fifty = solve(&spec(50), &q, &backend, SolveBudget::default(), seed).unwrap();
        assert!(fifty.solution.energy <= one.solution.energy, "seed {seed}");
        assert!(fifty.total_time >= one.total_time);
        assert!(fifty.subproblems_solved > one.subproblems_solved);
    }
}

#[test]
fn qbsolv_rejects_oversized_groups() {
    let spec = SolverSpec::Qbsolv(QbParams {
        subqubo_size: Some(10),
        ..Default::default()
    });
    let err = solve(&spec, &Qubo::zero(20), &c2(), SolveBudget::default(), 0);
    assert!(matches!(err, Err(SolverError::InvalidArgument(_))));
}

#[test]
fn ich_is_exact_on_complete_graphs() {
    let backend = c16();
    let mut hits = 0;
    for seed in 0..40 {
        let q = complete(10, seed);
        let r = run(SolverKind::Ich, &q, &backend, seed);
        assert_eq!(r.subproblems_solved, 1);
        hits += usize::from(r.solution.energy == exact_solve(&q).unwrap().energy);
    }
    assert!(hits >= 38, "{hits}/40");
}

#[test]
fn ich_without_edges_is_classical() {
    let mut b = QuboBuilder::new(6);
    for (i, a) in [-1.0, 2.0, -0.5, 0.0, 3.0, -2.0].into_iter().enumerate() {
        b.add_linear(i, a);
    }
    let r = run(SolverKind::Ich, &b.build(), &c16(), 0);
    assert_eq!(r.solution.bits, vec![true, false, true, false, false, true]);
    assert_eq!(r.subproblems_solved, 0);
    assert_eq!(param(&r, "isolated"), "6");
}

#[test]
fn ich_star_caps_the_halo() {
    let mut b = QuboBuilder::new(70);
    for leaf in 1..70 {
        b.add_quadratic(0, leaf, 1.0);
        b.add_linear(leaf, -0.5);
    }
    let q = b.build();
    let r = run(SolverKind::Ich, &q, &c16(), 4);
    assert_eq!(r.subproblems_solved, 1);
    assert_eq!(r.subproblem_vars, 65);
    assert_eq!(param(&r, "isolated"), "5");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ich_consumes_every_variable_once(n in 1usize..40, density in 0.0f64..0.5, seed: u64) {
        let q = random_qubo(n, density, seed);
        let r = run(SolverKind::Ich, &q, &c2(), seed);
        let isolated: usize = param(&r, "isolated").parse().unwrap();
        prop_assert_eq!(r.subproblem_vars + isolated, n);
    }

    #[test]
    fn solvers_are_deterministic(n in 1usize..20, seed: u64, k in 0usize..5) {
        let kind = SolverKind::ALL[k];
        let q = random_qubo(n, 0.4, seed);
        let backend = c2();
        let a = run(kind, &q, &backend, seed);
        let b = run(kind, &q, &backend, seed);
        prop_assert_eq!(a.without_timing(), b.without_timing());
    }
}
