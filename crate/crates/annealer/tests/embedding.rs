use proptest::prelude::*;
use qdecomp_annealer::{
    clique_embedding, heuristic_embed, logical_graph, AnnealerError, Chimera, Embedding,
};
use qdecomp_core::random::random_qubo;
use std::collections::{BTreeSet, VecDeque};

/// Coupler test from the cell coordinates alone.
fn coupled(m: usize, a: usize, b: usize) -> bool {
    let split = |q: usize| {
        let cell = q / 8;
        (cell / m, cell % m, (q % 8) / 4, q % 4)
    };
    let (ra, ca, sa, ka) = split(a);
    let (rb, cb, sb, kb) = split(b);
    if (ra, ca) == (rb, cb) {
        return sa != sb;
    }
    if sa != sb || ka != kb {
        return false;
    }
    if sa == 0 {
        ca == cb && ra.abs_diff(rb) == 1
    } else {
        ra == rb && ca.abs_diff(cb) == 1
    }
}

/// Standalone embedding checker, independent of `Embedding::validate`.
fn check(m: usize, chains: &[Vec<usize>], edges: &[(usize, usize)]) -> Result<(), String> {
    let nq = 8 * m * m;
    let mut used = BTreeSet::new();
    for (v, c) in chains.iter().enumerate() {
        if c.is_empty() {
            return Err(format!("empty chain {v}"));
        }
        for &q in c {
            if q >= nq || !used.insert(q) {
                return Err(format!("bad or reused qubit {q}"));
            }
        }
        let mut reached = vec![c[0]];
        let mut queue = VecDeque::from([c[0]]);
        while let Some(q) = queue.pop_front() {
            for &r in c {
                if !reached.contains(&r) && coupled(m, q, r) {
                    reached.push(r);
                    queue.push_back(r);
                }
            }
        }
        if reached.len() != c.len() {
            return Err(format!("chain {v} disconnected"));
        }
    }
    for &(i, j) in edges {
        if !chains[i].iter().any(|&a| chains[j].iter().any(|&b| coupled(m, a, b))) {
            return Err(format!("edge ({i},{j}) uncovered"));
        }
    }
    Ok(())
}

fn complete(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn edges_of(graph: &[Vec<usize>]) -> Vec<(usize, usize)> {
    graph
        .iter()
        .enumerate()
        .flat_map(|(i, ns)| ns.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
        .collect()
}

#[test]
fn k5_on_c2_passes_independent_checker() {
    let topo = Chimera::new(2);
    assert_eq!(topo.num_qubits(), 32);
    let e = clique_embedding(5, &topo).unwrap();
    check(2, e.chains(), &complete(5)).unwrap();
    e.validate(&topo, &complete(5)).unwrap();
}

#[test]
fn every_clique_size_is_valid() {
    for m in [2, 4, 16] {
        let topo = Chimera::new(m);
        for n in 0..=4 * m + 1 {
            let e = clique_embedding(n, &topo).unwrap();
            assert_eq!(e.num_vars(), n);
            e.validate(&topo, &complete(n)).unwrap();
            check(m, e.chains(), &complete(n)).unwrap_or_else(|err| panic!("m={m} n={n}: {err}"));
        }
        assert!(matches!(
            clique_embedding(4 * m + 2, &topo),
            Err(AnnealerError::CapacityExceeded { .. })
        ));
    }
}

#[test]
fn clique_embedding_is_deterministic() {
    let topo = Chimera::c16();
    assert_eq!(clique_embedding(40, &topo).unwrap(), clique_embedding(40, &topo).unwrap());
}

#[test]
fn heuristic_on_sparse_random_graphs() {
    let topo = Chimera::c16();
    let mut successes = 0;
    for seed in 0..20 {
        let g = logical_graph(&random_qubo(30, 0.2, seed));
        if let Ok(e) = heuristic_embed(&g, &topo, 5, seed) {
            check(16, e.chains(), &edges_of(&g)).unwrap();
            successes += 1;
        }
    }
    assert!(successes > 0);
}

#[test]
fn heuristic_embeds_small_dense_graphs() {
    let topo = Chimera::c16();
    for seed in 0..5 {
        let g = logical_graph(&random_qubo(16, 1.0, seed));
        let e = heuristic_embed(&g, &topo, 5, seed).expect("K_16 embeds");
        check(16, e.chains(), &edges_of(&g)).unwrap();
    }
}

#[test]
fn heuristic_results_always_valid() {
    // mix of easy and hard cases on a small topology; any success must check out
    let topo = Chimera::new(4);
    let mut successes = 0;
    for case in 0..100u64 {
        let n = 5 + (case % 20) as usize;
        let density = 0.1 + 0.05 * (case % 10) as f64;
        let g = logical_graph(&random_qubo(n, density, 1000 + case));
        if let Ok(e) = heuristic_embed(&g, &topo, 3, case) {
            check(4, e.chains(), &edges_of(&g)).unwrap();
            successes += 1;
        }
    }
    assert!(successes > 0);
}

#[test]
fn validator_rejects_broken_clique() {
    let topo = Chimera::new(2);
    let e = clique_embedding(8, &topo).unwrap();
    let mut chains = e.chains().to_vec();
    let moved = chains[7].pop().unwrap();
    chains[0].push(moved);
    assert!(Embedding::new(chains).validate(&topo, &complete(8)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn heuristic_success_implies_validity(n in 2usize..25, density in 0.05f64..0.6, seed: u64) {
        let topo = Chimera::new(4);
        let g = logical_graph(&random_qubo(n, density, seed));
        if let Ok(e) = heuristic_embed(&g, &topo, 2, seed) {
            prop_assert!(check(4, e.chains(), &edges_of(&g)).is_ok());
        }
    }
}
