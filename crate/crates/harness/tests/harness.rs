use std::time::Duration;

use proptest::prelude::*;
use qdecomp_harness::*;
use qdecomp_problems::dbg::{DbgParams, OptimizationType};
use qdecomp_problems::tsp::{gen_tsp_random, TspMeta};
use qdecomp_problems::ProblemMeta;
use qdecomp_solvers::{QbParams, SolverSpec};

fn dbg(layers: usize, npl: usize) -> ProblemSpec {
    ProblemSpec::Dbg(DbgParams {
        number_of_layers: layers,
        nodes_per_layer: npl,
        ..Default::default()
    })
}

fn tsp(n: usize) -> ProblemSpec {
    ProblemSpec::Tsp(TspSpec {
        cities: TspCities::Random(n),
        penalties: None,
    })
}

#[test]
fn config_parses_sections_lists_and_comments() {
    let cfg = Config::parse(
        "# comment\n[problem]\nkind = dbg\nnumber_of_layers = 2, 3   # two values\n\n[solver]\nname = random\n",
    )
    .unwrap();
    assert_eq!(cfg.get("problem", "number_of_layers").unwrap().values, vec!["2", "3"]);
    assert_eq!(cfg.get("problem", "number_of_layers").unwrap().line, 4);
    assert_eq!(cfg.experiments().unwrap().len(), 2);
}

#[test]
fn config_errors_carry_line_numbers() {
    let cases = [
        ("[problem]\nkind = dbg\nnope\n", 3),
        ("kind = dbg\n", 1),
        ("[problem]\nkind = dbg\nkind = tsp\n", 3),
        ("[widgets]\n", 1),
        ("[problem]\nkind = dbg\nnumber_of_layers = 2,,3\n", 3),
    ];
    for (text, line) in cases {
        assert_eq!(Config::parse(text).unwrap_err().line, line, "{text:?}");
    }
    let cfg = Config::parse("[problem]\nkind = dbg\nnumber_of_layers = many\n[solver]\nname = random\n").unwrap();
    assert_eq!(cfg.experiments().unwrap_err().line, 3);
    let cfg = Config::parse("[problem]\nkind = dbg\n[solver]\nname = ich\nnum_repeats = 3\n").unwrap();
    assert_eq!(cfg.experiments().unwrap_err().line, 5);
    let cfg = Config::parse("[problem]\nkind = dbg\n[solver]\nname = fa\n[run]\nthreshold = 0\n").unwrap();
    assert_eq!(cfg.experiments().unwrap_err().line, 6);
}

#[test]
fn fa_grid_has_six_cells_in_order() {
    let cfg = Config::parse(
        "[problem]\nkind = dbg\n[solver]\nname = fa\npopulation_size = 250, 500\nnum_generations = 10, 50, 100\n[run]\nseed = 40\n",
    )
    .unwrap();
    let cells = cfg.experiments().unwrap();
    let got: Vec<(usize, usize, u64)> = cells
        .iter()
        .map(|c| match &c.solver {
            SolverSpec::Fa(p) => (p.population_size, p.num_generations, c.seed),
            other => panic!("{other:?}"),
        })
        .collect();
    assert_eq!(
        got,
        vec![
            (250, 10, 40),
            (250, 50, 41),
            (250, 100, 42),
            (500, 10, 43),
            (500, 50, 44),
            (500, 100, 45)
        ]
    );
}

#[test]
fn prefixed_solver_keys_apply_to_their_solver_only() {
    let cfg = Config::parse(
        "[problem]\nkind = tsp\n[solver]\nname = random, qbsolv\nqbsolv.num_repeats = 1, 50\n[run]\nrepeats = 2\n",
    )
    .unwrap();
    let cells = cfg.experiments().unwrap();
    let names: Vec<String> = cells.iter().map(|c| solver_echo(&c.solver)).collect();
    assert_eq!(cells.len(), 6);
    assert_eq!(names[0], "");
    assert!(names[2].starts_with("num_repeats=1;"));
    assert!(names[5].starts_with("num_repeats=50;"));
    let bad = Config::parse("[problem]\nkind = tsp\n[solver]\nname = random, qbsolv\nnum_repeats = 2\n").unwrap();
    assert!(bad.experiments().is_err());
}

#[test]
fn overrides_replace_file_values() {
    let mut cfg = Config::parse("[problem]\nkind = dbg\n[solver]\nname = random\n[run]\nseed = 1\n").unwrap();
    cfg.set_dotted("run.seed=9").unwrap();
    cfg.set_dotted("problem.number_of_layers = 2").unwrap();
    let cells = cfg.experiments().unwrap();
    assert_eq!(cells[0].seed, 9);
    assert_eq!(cells[0].problem, dbg(2, 20));
    assert!(cfg.set_dotted("seed=3").is_err());
}

#[test]
fn empty_grid_writes_header_only() {
    let cfg = Config::parse("[problem]\nkind = dbg\n[solver]\nname = random\n[run]\nrepeats = 0\n").unwrap();
    let cells = cfg.experiments().unwrap();
    assert!(cells.is_empty());
    let text = records_to_string(&run_sweep(&cells, 4));
    assert_eq!(text.trim_end(), COLUMNS.join(","));
    assert!(read_records(text.as_bytes()).unwrap().is_empty());
}

#[test]
fn full_size_dbg_record() {
    let mut p = DbgParams::default();
    p.optimization_type = OptimizationType::Constant;
    let spec = ExperimentSpec::new(ProblemSpec::Dbg(p), SolverSpec::Random, 3);
    let r = run_experiment(&spec).unwrap();
    let m = r.metrics().unwrap();
    assert_eq!(m.graph_size, 500);
    let d = m.edge_density.unwrap();
    assert!(d > 0.0 && d < 0.1, "{d}");
    assert_eq!(r.problem, "dbg");
    assert!(m.broken_constraints.unwrap() > 0);
}

#[test]
fn mwp_reports_broken_as_not_applicable() {
    let spec = ExperimentSpec::new(
        ProblemSpec::Mwp {
            params: Default::default(),
            weights: None,
        },
        SolverSpec::Ich,
        5,
    );
    let r = run_experiment(&spec).unwrap();
    assert_eq!(r.metrics().unwrap().broken_constraints, None);
    assert!(records_to_string(&[r]).contains(",N/A,"));
}

#[test]
fn repeated_runs_agree_except_timing() {
    for solver in [SolverSpec::Ich, SolverSpec::Qbsolv(QbParams::default()), SolverSpec::Random] {
        let spec = ExperimentSpec::new(tsp(4), solver, 8);
        let a = run_experiment(&spec).unwrap();
        let b = run_experiment(&spec).unwrap();
        assert_eq!(a.without_timing(), b.without_timing());
    }
}

#[test]
fn qbsolv_tsp5_matches_tour_enumeration() {
    let mut exact = 0;
    for seed in 0..100 {
        let spec = ExperimentSpec::new(tsp(5), SolverSpec::Qbsolv(QbParams::default()), seed);
        let r = run_experiment(&spec).unwrap();
        let meta = TspMeta::with_default_penalties(gen_tsp_random(5, seed).unwrap()).unwrap();
        // city 0 fixed first; 4! orders cover every tour
        let mut best = f64::INFINITY;
        let mut perm = vec![1, 2, 3, 4];
        permute(&mut perm, 0, &mut |p| {
            let tour: Vec<usize> = std::iter::once(0).chain(p.iter().copied()).collect();
            best = best.min(meta.tour_length(&tour));
        });
        let q = r.metrics().unwrap().fixed_quality;
        // tour lengths summed from different start cities differ in the last ulp
        let tol = 1e-9 * best;
        assert!(q >= best - tol, "seed {seed}: {q} < {best}");
        exact += usize::from((q - best).abs() <= tol);
    }
    assert!(exact >= 90, "{exact}/100");
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

#[test]
fn parallel_sweep_matches_serial() {
    let cfg = Config::parse(
        "[problem]\nkind = dbg\nnumber_of_layers = 2, 3\nnodes_per_layer = 10\n[solver]\nname = ich, qbsolv\n[run]\nseed = 5\n",
    )
    .unwrap();
    let cells = cfg.experiments().unwrap();
    assert_eq!(cells.len(), 4);
    let serial: Vec<_> = run_sweep(&cells, 1).iter().map(ExperimentRecord::without_timing).collect();
    let parallel: Vec<_> = run_sweep(&cells, 4).iter().map(ExperimentRecord::without_timing).collect();
    assert_eq!(serial, parallel);
    assert_eq!(serial.iter().map(|r| r.cell).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
}

#[test]
fn failing_cell_does_not_stop_the_sweep() {
    let cells = vec![
        ExperimentSpec::new(tsp(2), SolverSpec::Random, 0),
        ExperimentSpec::new(tsp(4), SolverSpec::Random, 1),
    ];
    let records = run_sweep(&cells, 2);
    assert!(records[0].outcome.as_ref().unwrap_err().contains("at least 3"));
    assert!(records[1].outcome.is_ok());
    assert_eq!(records[0].problem, "tsp");
}

#[test]
fn changing_one_seed_changes_one_row() {
    let mut cells: Vec<ExperimentSpec> = (0..4).map(|s| ExperimentSpec::new(dbg(3, 8), SolverSpec::Ich, s)).collect();
    let before = run_sweep(&cells, 1);
    cells[2].seed = 77;
    let after = run_sweep(&cells, 1);
    for i in 0..4 {
        let same = before[i].without_timing() == after[i].without_timing();
        assert_eq!(same, i != 2, "row {i}");
    }
}

#[test]
fn threshold_is_honoured() {
    let mut spec = ExperimentSpec::new(dbg(10, 20), SolverSpec::Qbsolv(QbParams { num_repeats: 50, ..Default::default() }), 2);
    spec.threshold_seconds = 0.5;
    let r = run_experiment(&spec).unwrap();
    let m = r.metrics().unwrap();
    assert!(m.timed_out);
    // one in-flight 65-variable sub-solve may overshoot
    let overshoot = Duration::from_secs(5).as_secs_f64();
    assert!(m.total_time <= spec.threshold_seconds + overshoot, "{}", m.total_time);
}

#[test]
fn generated_files_solve_like_the_original() {
    let dir = std::env::temp_dir().join(format!("qdecomp-harness-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let original = ExperimentSpec::new(tsp(4), SolverSpec::Ich, 6);
    let inst = original.problem.generate(6).unwrap();
    let (qp, mp) = (dir.join("t.qubo"), dir.join("t.meta"));
    std::fs::write(&qp, inst.qubo.to_text()).unwrap();
    std::fs::write(&mp, qdecomp_problems::sidecar::to_sidecar(&inst)).unwrap();
    let from_file = ExperimentSpec::new(ProblemSpec::File { qubo: qp, meta: mp }, SolverSpec::Ich, 6);
    let loaded = from_file.problem.generate(6).unwrap();
    assert!(matches!(loaded.meta, ProblemMeta::Tsp(_)));
    let a = run_experiment(&original).unwrap();
    let b = run_experiment(&from_file).unwrap();
    assert_eq!(a.metrics().unwrap().without_timing(), b.metrics().unwrap().without_timing());
    std::fs::remove_dir_all(dir).unwrap();
}

fn record(problem: &str, solver: &str, energy: f64, quality: f64, timed_out: bool) -> ExperimentRecord {
    ExperimentRecord {
        cell: 0,
        problem: problem.into(),
        problem_params: "a=1".into(),
        solver: solver.into(),
        solver_params: String::new(),
        backend_params: "b=2".into(),
        threshold_seconds: 60.0,
        seed: 1,
        outcome: Ok(Metrics {
            graph_size: 10,
            edge_density: Some(0.5),
            total_time: 1.5,
            classical_time: 0.5,
            embedding_time: 0.25,
            quantum_time: 0.75,
            solution_energy: energy,
            broken_constraints: Some(1),
            fixed_quality: quality,
            timed_out,
        subproblems: 3,
        }),
    }
}

#[test]
fn summary_of_one_record_is_that_record() {
    let rows = summarize(&[record("dbg", "ich", -2.5, 4.0, false)]);
    assert_eq!(rows.len(), 1);
    let s = &rows[0];
    assert_eq!((s.runs, s.failed), (1, 0));
    assert_eq!(s.mean_energy, Some(-2.5));
    assert_eq!(s.min_energy, Some(-2.5));
    assert_eq!(s.mean_quality, Some(4.0));
    assert_eq!(s.mean_total_time, Some(1.5));
    assert_eq!(s.mean_quantum_time, Some(0.75));
    assert_eq!(s.completion_rate, 1.0);
}

#[test]
fn all_timed_out_means_zero_completion() {
    let rows = summarize(&[record("dbg", "fa", 1.0, 1.0, true), record("dbg", "fa", 2.0, 1.0, true)]);
    assert_eq!(rows[0].completion_rate, 0.0);
}

#[test]
fn summary_means_match_hand_computation() {
    let energies = [-3.0, -1.0, -2.5, 0.5, -4.0, -0.25, -1.75, -2.0, -3.5, 1.0];
    let mut records: Vec<ExperimentRecord> = energies
        .iter()
        .enumerate()
        .map(|(i, &e)| record("dbg", "qbsolv", e, -e, i == 3))
        .collect();
    records.push(record("tsp", "qbsolv", 99.0, 1.0, false));
    let mut failed = record("dbg", "qbsolv", 0.0, 0.0, false);
    failed.outcome = Err("boom".into());
    records.push(failed);
    let rows = summarize(&records);
    assert_eq!(rows.len(), 2);
    let s = &rows[0];
    assert_eq!((s.runs, s.failed), (11, 1));
    assert_eq!(s.mean_energy, Some(-16.5 / 10.0));
    assert_eq!(s.min_energy, Some(-4.0));
    assert_eq!(s.mean_quality, Some(16.5 / 10.0));
    assert_eq!(s.completion_rate, 9.0 / 11.0);
}

#[test]
fn summary_csv_has_one_line_per_group() {
    let rows = summarize(&[record("dbg", "ich", 1.0, 1.0, false), record("dbg", "fa", 1.0, 1.0, false)]);
    let mut buf = Vec::new();
    write_summary(&mut buf, &rows).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 3);
}

#[test]
fn wrong_schema_is_rejected() {
    let text = records_to_string(&[record("dbg", "ich", 1.0, 1.0, false)]).replacen("\n1,", "\n2,", 1);
    assert!(read_records(text.as_bytes()).is_err());
    assert!(read_records("cell,problem\n".as_bytes()).is_err());
}

fn arb_record() -> impl Strategy<Value = ExperimentRecord> {
    let metrics = (
        0usize..1000,
        proptest::option::of(0.0f64..1.0),
        (0u64..10_000_000, 0u64..10_000, 0u64..10_000),
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        proptest::option::of(0usize..50),
        -1e6f64..1e6,
        any::<bool>(),
        0usize..100,
    )
        .prop_map(|(graph_size, edge_density, (t, e, q), energy, broken, quality, timed_out, subproblems)| Metrics {
            graph_size,
            edge_density,
            total_time: (t + e + q) as f64 / 1000.0,
            classical_time: t as f64 / 1000.0,
            embedding_time: e as f64 / 1000.0,
            quantum_time: q as f64 / 1000.0,
            solution_energy: energy,
            broken_constraints: broken,
            fixed_quality: quality,
            timed_out,
            subproblems,
        });
    let outcome = prop_oneof![
        metrics.prop_map(Ok),
        "[a-z ,\"\n:]{0,30}".prop_map(Err),
    ];
    (
        0usize..500,
        "[a-z]{3}",
        "[a-z_=;0-9 .]{0,40}",
        "[a-z]{2,6}",
        0.001f64..4000.0,
        any::<u64>(),
        outcome,
    )
        .prop_map(|(cell, problem, params, solver, threshold, seed, outcome)| ExperimentRecord {
            cell,
            problem,
            problem_params: params.clone(),
            solver,
            solver_params: params,
            backend_params: "chimera_m=16".into(),
            threshold_seconds: threshold,
            seed,
            outcome,
        })
}

proptest! {
    #[test]
    fn csv_round_trip(records in proptest::collection::vec(arb_record(), 0..8)) {
        let text = records_to_string(&records);
        prop_assert_eq!(read_records(text.as_bytes()).unwrap(), records);
    }
}
