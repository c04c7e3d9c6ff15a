use super::*;
use crate::graph::generate::random_digraph;
use crate::rational::{rat, zero};
use proptest::prelude::*;

fn dg(n: usize, arcs: &[(Vertex, Vertex)]) -> Graph {
    Graph::from_edges(n, true, arcs).unwrap()
}

fn exact(g: &Graph, x: Vertex, y: Vertex, alpha: &Rational) -> DistanceValue {
    directed_w1(g, x, y, alpha).unwrap()
}

#[test]
fn effective_lengths() {
    let tri = dg(3, &[(0, 1), (1, 2), (2, 0)]);
    assert_eq!(effective_length(&tri, &[0, 1, 2]).unwrap().effective_length, 3);
    let bent = dg(3, &[(0, 1), (1, 2), (0, 2)]);
    let p = effective_length(&bent, &[0, 1, 2]).unwrap();
    assert_eq!((p.forward_count, p.backward_count, p.effective_length), (2, 1, 1));
    let sq = dg(4, &[(0, 1), (1, 2), (3, 2), (0, 3)]);
    assert_eq!(effective_length(&sq, &[0, 1, 2, 3]).unwrap().effective_length, 0);
    let all = dg(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
    assert_eq!(effective_length(&all, &[0, 1, 2, 3]).unwrap().effective_length, 4);
    let one_back = dg(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
    assert_eq!(effective_length(&one_back, &[0, 1, 2, 3]).unwrap().effective_length, 2);
}

#[test]
fn effective_length_errors() {
    let both = dg(3, &[(0, 1), (1, 0), (1, 2), (2, 0)]);
    assert_eq!(effective_length(&both, &[0, 1, 2]), Err(DirectedError::AmbiguousBidirectedEdge(0, 1)));
    let open = dg(3, &[(0, 1), (1, 2)]);
    assert!(matches!(effective_length(&open, &[0, 1, 2]), Err(DirectedError::NotACycle(_))));
    assert!(matches!(effective_length(&open, &[0, 1]), Err(DirectedError::NotACycle(_))));
    let u = Graph::from_edges(3, false, &[(0, 1), (1, 2), (2, 0)]).unwrap();
    assert_eq!(effective_length(&u, &[0, 1, 2]), Err(DirectedError::UndirectedGraph));
}

#[test]
fn three_cycle_and_path() {
    let tri = dg(3, &[(0, 1), (1, 2), (2, 0)]);
    let r = directed_orc(&tri, 0, 1, &zero()).unwrap();
    assert_eq!(r.w1, DistanceValue::Finite(one()));
    assert_eq!(r.kappa, Some(zero()));
    assert!(r.directed && r.is_consistent());

    let path = dg(3, &[(0, 1), (1, 2)]);
    assert_eq!(directed_orc(&path, 0, 1, &zero()).unwrap().kappa, Some(zero()));
    assert_eq!(directed_orc(&path, 1, 0, &zero()), Err(DirectedError::NotAnArc(1, 0)));
}

#[test]
fn sink_and_blocked() {
    let g = dg(2, &[(0, 1)]);
    assert_eq!(
        directed_orc(&g, 0, 1, &zero()),
        Err(DirectedError::Curvature(CurvatureError::Measure(MeasureError::SinkVertex(1))))
    );
    assert_eq!(directed_heuristic_plan(&g, 0, 1, &zero()), Err(DirectedError::Infeasible(1)));
    let g = dg(3, &[(0, 1), (1, 2), (1, 0)]);
    assert!(directed_orc(&g, 0, 1, &zero()).unwrap().kappa.is_some());
    // Mass of m_x on a vertex that cannot reach m_y's support.
    let g = dg(4, &[(0, 1), (0, 3), (1, 2), (2, 1)]);
    let r = directed_orc(&g, 0, 1, &zero()).unwrap();
    assert_eq!(r.w1, DistanceValue::Unreachable);
    assert_eq!(r.kappa, None);
    assert!(matches!(directed_heuristic_plan(&g, 0, 1, &zero()), Err(DirectedError::Infeasible(_))));
}

#[test]
fn heuristic_examples() {
    let tri = dg(3, &[(0, 1), (1, 2), (2, 0)]);
    let h = directed_heuristic_plan(&tri, 0, 1, &zero()).unwrap();
    assert_eq!(DistanceValue::Finite(h.plan.cost().clone()), exact(&tri, 0, 1, &zero()));
    assert!(h.in_three_cycle);

    let trans = dg(3, &[(0, 1), (1, 2), (0, 2)]);
    for alpha in [zero(), rat(1, 2)] {
        let h = directed_heuristic_plan(&trans, 0, 1, &alpha).unwrap();
        let w = exact(&trans, 0, 1, &alpha);
        assert!(DistanceValue::Finite(h.plan.cost().clone()) >= w);
        let mx = yamada_measure(&trans, 0, &alpha).unwrap();
        let my = yamada_measure(&trans, 1, &alpha).unwrap();
        assert!(h.plan.couples(&mx, &my));
    }
}

#[test]
fn heuristic_claim_checks_hold_on_three_cycle() {
    let tri = dg(3, &[(0, 1), (1, 2), (2, 0)]);
    let h = directed_heuristic_plan(&tri, 0, 1, &rat(1, 3)).unwrap();
    assert!(!h.checks.is_empty());
    assert!(h.checks.iter().all(|c| c.holds), "{:?}", h.checks);
}

#[test]
fn asymmetry_witness() {
    // 0 -> 1 -> 2 -> 3 -> 0 with chord 1 -> 0: both arcs between 0 and 1.
    let g = dg(4, &[(0, 1), (1, 0), (1, 2), (2, 3), (3, 0)]);
    let fwd = directed_orc(&g, 0, 1, &zero()).unwrap();
    let bwd = directed_orc(&g, 1, 0, &zero()).unwrap();
    assert_ne!(fwd.w1, bwd.w1);
}

#[test]
fn bound_formula() {
    assert_eq!(directed_3cycle_w1_bound(3, 3, 1, ThreeCycleCase::Forward), Ok(rat(2, 3)));
    assert_eq!(directed_3cycle_w1_bound(4, 4, 1, ThreeCycleCase::Reverse), Ok(rat(3, 2)));
    assert_eq!(
        directed_3cycle_w1_bound(1, 1, 1, ThreeCycleCase::Forward),
        Err(DirectedError::FeasibilityViolated(int(-2)))
    );
    assert_eq!(directed_3cycle_w1_bound(0, 2, 0, ThreeCycleCase::Forward), Err(DirectedError::ZeroDegree));
}

#[test]
fn bound_report_runs() {
    let g = random_digraph(9, 0.4, 5);
    let report = three_cycle_bound_report(&g).unwrap();
    for c in &report {
        assert!(three_cycle_count(&g, c.x, c.y) > 0);
        if c.bound.is_err() {
            assert_eq!(c.bound_holds, None);
        }
    }
}

#[test]
fn branchings() {
    let out = dg(4, &[(0, 1), (0, 2), (0, 3)]);
    assert_eq!(classify_tree(&out), BranchingClass { kind: Branching::OutBranching, root: Some(0) });
    let inn = dg(4, &[(1, 0), (2, 0), (3, 0)]);
    assert_eq!(classify_tree(&inn), BranchingClass { kind: Branching::InBranching, root: Some(0) });
    let toward = dg(3, &[(0, 1), (2, 1)]);
    assert_eq!(classify_tree(&toward), BranchingClass { kind: Branching::InBranching, root: Some(1) });
    let mixed = dg(4, &[(1, 0), (1, 2), (3, 2)]);
    assert_eq!(classify_tree(&mixed).kind, Branching::Mixed);
    let cyc = dg(3, &[(0, 1), (2, 1), (0, 2)]);
    assert_eq!(classify_tree(&cyc).kind, Branching::NotATree);
    let bi = dg(2, &[(0, 1), (1, 0)]);
    assert_eq!(classify_tree(&bi).kind, Branching::NotATree);
    let u = Graph::from_edges(2, false, &[(0, 1)]).unwrap();
    assert_eq!(classify_tree(&u).kind, Branching::NotATree);
    let chain = dg(3, &[(0, 1), (1, 2)]);
    assert_eq!(classify_tree(&chain), BranchingClass { kind: Branching::OutBranching, root: Some(0) });
}

#[test]
fn sweep_matches_single_calls() {
    let g = random_digraph(8, 0.35, 11);
    let sweep = directed_sweep(&g, &rat(1, 4), Execution::Sequential).unwrap();
    assert_eq!(sweep.len(), g.edge_count());
    for e in sweep {
        let single = directed_orc(&g, e.u, e.v, &rat(1, 4)).map_err(|e| format!("{e}"));
        match (e.outcome, single) {
            (Ok(crate::curvature::EdgeValue::Orc(r)), Ok(s)) => assert_eq!(r.w1, s.w1),
            (Err(_), Err(_)) => {}
            (a, b) => panic!("sweep {a:?} vs single {b:?}"),
        }
    }
}

fn arb_digraph() -> impl Strategy<Value = Graph> {
    (3usize..8, 0.2f64..0.7, any::<u64>()).prop_map(|(n, p, seed)| random_digraph(n, p, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn heuristic_never_beats_exact(g in arb_digraph(), a in 0i64..4) {
        let alpha = rat(a, 4);
        for (x, y) in g.edges() {
            let Ok(h) = directed_heuristic_plan(&g, x, y, &alpha) else { continue };
            let w = exact(&g, x, y, &alpha);
            prop_assert!(w.is_finite());
            prop_assert!(DistanceValue::Finite(h.plan.cost().clone()) >= w);
        }
    }

    #[test]
    fn parity(n in 3usize..9, flips in proptest::collection::vec(any::<bool>(), 9)) {
        let arcs: Vec<(Vertex, Vertex)> = (0..n)
            .map(|i| { let j = (i + 1) % n; if flips[i] { (j, i) } else { (i, j) } })
            .collect();
        let g = dg(n, &arcs);
        let cycle: Vec<Vertex> = (0..n).collect();
        let p = effective_length(&g, &cycle).unwrap();
        prop_assert_eq!(p.forward_count + p.backward_count, n);
        prop_assert_eq!(p.effective_length % 2, n % 2);
    }

    #[test]
    fn out_branching_degrees(n in 2usize..12, seed in any::<u64>()) {
        let t = crate::graph::generate::random_tree(n, seed);
        let mut parent = vec![usize::MAX; n];
        let mut stack = vec![0];
        parent[0] = 0;
        let mut arcs = Vec::new();
        while let Some(v) = stack.pop() {
            for w in t.neighbors(v) {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    arcs.push((v, w));
                    stack.push(w);
                }
            }
        }
        let g = dg(n, &arcs);
        let c = classify_tree(&g);
        prop_assert_eq!(c, BranchingClass { kind: Branching::OutBranching, root: Some(0) });
        prop_assert!((0..n).all(|v| g.degrees(v).in_deg <= 1));
        let rev: Vec<_> = arcs.iter().map(|&(a, b)| (b, a)).collect();
        // Reversed paths are also out-branchings from the far end.
        let r = classify_tree(&dg(n, &rev));
        let expected = BranchingClass { kind: Branching::InBranching, root: Some(0) };
        prop_assert!(r == expected || r.kind == Branching::OutBranching);
        prop_assert!((0..n).filter(|&v| v != 0).all(|v| dg(n, &rev).degrees(v).out_deg == 1));
    }
}
