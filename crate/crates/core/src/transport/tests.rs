use super::hungarian::brute_force_assignment;
use super::*;
use crate::graph::generate::{complete, path, random_connected, random_digraph};
use crate::graph::{all_pairs_distances, Graph};
use crate::measures::{dirac, lly_measure, yamada_measure};
use crate::rational::{int, rat, zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn measure(entries: &[(Vertex, Rational)]) -> VertexMeasure {
    VertexMeasure::new(entries.iter().cloned()).unwrap()
}

fn finite(c: DistanceValue) -> Rational {
    c.finite().cloned().expect("finite cost")
}

/// `denom` atoms dropped on random vertices of `0..n`.
fn random_measure(rng: &mut ChaCha8Rng, n: usize, denom: u32) -> VertexMeasure {
    let mut counts = vec![0i64; n];
    let spread = rng.random_range(1..=n.min(5));
    let support: Vec<usize> = (0..spread).map(|_| rng.random_range(0..n)).collect();
    for _ in 0..denom {
        counts[support[rng.random_range(0..spread)]] += 1;
    }
    VertexMeasure::new(counts.iter().enumerate().map(|(v, c)| (v, rat(*c, i64::from(denom))))).unwrap()
}

#[test]
fn identical_measures_cost_nothing() {
    let g = complete(4);
    let d = all_pairs_distances(&g);
    let m = measure(&[(0, rat(1, 3)), (2, rat(2, 3))]);
    let t = wasserstein1(&m, &m, &d);
    assert_eq!(t.cost(), DistanceValue::Finite(zero()));
    let plan = t.plan().unwrap();
    assert!(plan.entries().iter().all(|e| e.source == e.target));
    assert!(plan.couples(&m, &m));
    let cert = wasserstein1_dual(&m, &m, &d).unwrap();
    assert!(cert.potentials.values().all(Zero::is_zero));
    assert_eq!(cert.value, zero());
}

#[test]
fn diracs_cost_their_distance() {
    let g = path(5);
    let d = all_pairs_distances(&g);
    for x in 0..5 {
        for y in 0..5 {
            assert_eq!(wasserstein1(&dirac(x), &dirac(y), &d).cost(), d.get(x, y).clone());
        }
    }
}

#[test]
fn triangle_examples() {
    let g = complete(3);
    let d = all_pairs_distances(&g);
    let w = |a: Rational| {
        finite(wasserstein1(&lly_measure(&g, 0, &a).unwrap(), &lly_measure(&g, 1, &a).unwrap(), &d).cost())
    };
    assert_eq!(w(zero()), rat(1, 2));
    assert_eq!(w(rat(1, 2)), rat(1, 4));
}

#[test]
fn blocked_mass_is_unreachable() {
    // x -> y only: from y nothing can reach x.
    let g = Graph::from_edges(2, true, &[(0, 1)]).unwrap();
    let d = all_pairs_distances(&g);
    assert_eq!(wasserstein1(&dirac(1), &dirac(0), &d), Transport::Unreachable);
    assert_eq!(wasserstein1_dual(&dirac(1), &dirac(0), &d), Err(TransportError::InfeasibleTransport));
    let m = measure(&[(0, rat(1, 2)), (1, rat(1, 2))]);
    assert_eq!(wasserstein1(&dirac(1), &m, &d), Transport::Unreachable);
    assert_eq!(wasserstein1(&m, &dirac(1), &d).cost(), DistanceValue::Finite(rat(1, 2)));
}

#[test]
fn single_edge_certificate() {
    let g = path(2);
    let d = all_pairs_distances(&g);
    let m0 = lly_measure(&g, 0, &zero()).unwrap();
    let m1 = lly_measure(&g, 1, &zero()).unwrap();
    let forward = wasserstein1_dual(&m0, &m1, &d).unwrap();
    assert_eq!(forward.value, int(1));
    assert_eq!(forward.potentials, [(0, zero()), (1, int(1))].into_iter().collect());
    let backward = wasserstein1_dual(&m1, &m0, &d).unwrap();
    assert_eq!(backward.potentials, [(0, int(1)), (1, zero())].into_iter().collect());
    assert_eq!(forward.lipschitz_violation(&d), None);
    assert_eq!(backward.lipschitz_violation(&d), None);
}

#[test]
fn tree_witness_potential_is_optimal() {
    // x = 0 with leaves 2, 3, 4; y = 1 with leaves 5, 6.
    let g = Graph::from_edges(7, false, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (1, 6)]).unwrap();
    let d = all_pairs_distances(&g);
    let (dx, dy) = (4, 3);
    let mx = lly_measure(&g, 0, &zero()).unwrap();
    let my = lly_measure(&g, 1, &zero()).unwrap();
    let expected = int(3) - rat(2, dx) - rat(2, dy);
    let f: BTreeMap<Vertex, Rational> =
        [(2, 3), (3, 3), (4, 3), (0, 2), (1, 1), (5, 0), (6, 0)].into_iter().map(|(v, x)| (v, int(x))).collect();
    let witness = DualCertificate { potentials: f, value: expected.clone() };
    assert_eq!(witness.lipschitz_violation(&d), None);
    let as_map = |m: &VertexMeasure| m.iter().map(|(v, p)| (v, p.clone())).collect::<BTreeMap<_, _>>();
    assert_eq!(witness.evaluate(&as_map(&mx), &as_map(&my)), Some(expected.clone()));
    let sol = solve(&mx, &my, &d).unwrap();
    assert_eq!(sol.plan.cost(), &expected);
    assert_eq!(sol.certificate.value, expected);
}

#[test]
fn duality_gap_detects_suboptimal_plans() {
    let g = path(4);
    let d = all_pairs_distances(&g);
    let mu = measure(&[(0, rat(1, 2)), (3, rat(1, 2))]);
    let nu = measure(&[(1, rat(1, 2)), (2, rat(1, 2))]);
    let sol = solve(&mu, &nu, &d).unwrap();
    assert_eq!(sol.plan.cost(), &int(1));
    assert_eq!(duality_gap(&sol.plan, &sol.certificate).unwrap(), zero());
    let swapped = TransportPlan::from_entries([(0, 2, rat(1, 2)), (3, 1, rat(1, 2))], &d).unwrap();
    assert!(swapped.couples(&mu, &nu));
    assert_eq!(duality_gap(&swapped, &sol.certificate).unwrap(), int(1));

    let trivial = solve(&dirac(2), &dirac(2), &d).unwrap();
    assert_eq!(duality_gap(&trivial.plan, &trivial.certificate).unwrap(), zero());

    let other = solve(&dirac(0), &dirac(3), &d).unwrap();
    assert_eq!(duality_gap(&sol.plan, &other.certificate), Err(TransportError::MismatchedProblem));
}

#[test]
fn plan_rejects_unreachable_pairs() {
    let g = Graph::from_edges(2, true, &[(0, 1)]).unwrap();
    let d = all_pairs_distances(&g);
    assert_eq!(
        TransportPlan::from_entries([(1, 0, int(1))], &d),
        Err(TransportError::UnreachablePair(1, 0))
    );
}

#[test]
fn oracle_examples() {
    let tri = complete(3);
    let d = all_pairs_distances(&tri);
    let h = rat(1, 2);
    let (m0, m1) = (lly_measure(&tri, 0, &h).unwrap(), lly_measure(&tri, 1, &h).unwrap());
    assert_eq!(unit_split_oracle(&m0, &m1, &d, 4).unwrap(), rat(1, 4));
    let edge = path(2);
    let de = all_pairs_distances(&edge);
    let (e0, e1) = (lly_measure(&edge, 0, &h).unwrap(), lly_measure(&edge, 1, &h).unwrap());
    assert_eq!(unit_split_oracle(&e0, &e1, &de, 2).unwrap(), zero());
    assert!(matches!(unit_split_oracle(&m0, &m1, &d, 2), Err(TransportError::DenominatorMismatch { .. })));
}

#[test]
fn hungarian_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let n = rng.random_range(1..=6);
        let costs: Vec<Vec<Option<Rational>>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| rng.random_bool(0.85).then(|| rat(rng.random_range(0..20), rng.random_range(1..5))))
                    .collect()
            })
            .collect();
        let fast = min_cost_assignment(&costs).map(|(c, _)| c);
        assert_eq!(fast, brute_force_assignment(&costs), "{costs:?}");
    }
}

#[test]
fn asymmetric_ground_distance_gives_asymmetric_w1() {
    // x -> y, y -> x, y -> z: from m_x = delta_y everything is reachable,
    // while m_y puts mass on z, which reaches nothing.
    let g = Graph::from_edges(3, true, &[(0, 1), (1, 0), (1, 2)]).unwrap();
    let d = all_pairs_distances(&g);
    let mx = yamada_measure(&g, 0, &zero()).unwrap();
    let my = yamada_measure(&g, 1, &zero()).unwrap();
    assert_eq!(wasserstein1(&mx, &my, &d).cost(), DistanceValue::Finite(int(1)));
    assert_eq!(wasserstein1(&my, &mx, &d), Transport::Unreachable);
    // A finite/finite witness: directed 4-cycle with a chord.
    let h = Graph::from_edges(4, true, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
    let dh = all_pairs_distances(&h);
    let a = measure(&[(0, rat(1, 2)), (1, rat(1, 2))]);
    let b = measure(&[(2, int(1))]);
    assert_ne!(wasserstein1(&a, &b, &dh).cost(), wasserstein1(&b, &a, &dh).cost());
}

#[test]
fn sinkhorn_examples() {
    let g = complete(3);
    let d = all_pairs_distances(&g);
    let m0 = lly_measure(&g, 0, &zero()).unwrap();
    let m1 = lly_measure(&g, 1, &zero()).unwrap();
    let same = sinkhorn_approx(&m0, &m0, &d, SinkhornParams::default()).unwrap();
    assert!(same.cost.abs() < 1e-9, "{same:?}");
    let with_reg = |reg| SinkhornParams { reg, ..Default::default() };
    let fine = sinkhorn_approx(&m0, &m1, &d, with_reg(1e-3)).unwrap();
    assert!((fine.cost - 0.5).abs() < 1e-2, "{fine:?}");
    assert!(fine.marginal_violation <= 1e-9);

    let errors: Vec<f64> = [1e-1, 1e-2, 1e-3]
        .iter()
        .map(|&reg| (sinkhorn_approx(&m0, &m1, &d, with_reg(reg)).unwrap().cost - 0.5).abs())
        .collect();
    // Below ~1e-2 the bias is already at rounding level.
    assert!(errors[0] > errors[1] && errors[2] <= errors[1] + 1e-12, "{errors:?}");
}

#[test]
fn sinkhorn_reports_non_convergence_and_bad_parameters() {
    let g = path(4);
    let d = all_pairs_distances(&g);
    let mu = measure(&[(0, rat(1, 2)), (3, rat(1, 2))]);
    let nu = measure(&[(1, rat(1, 2)), (2, rat(1, 2))]);
    let r = sinkhorn_approx(&mu, &nu, &d, SinkhornParams { reg: 1e-3, max_iters: 1, tol: 0.0 });
    assert!(matches!(r, Err(TransportError::NotConverged { iterations: 1, .. })));
    let r = sinkhorn_approx(&mu, &nu, &d, SinkhornParams { reg: 0.0, ..Default::default() });
    assert!(matches!(r, Err(TransportError::InvalidParameter(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn primal_dual_and_oracle_agree(seed in any::<u64>(), n in 2usize..9, denom in 1u32..=24) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_connected(n, 0.3, seed);
        let d = all_pairs_distances(&g);
        let mu = random_measure(&mut rng, n, denom);
        let nu = random_measure(&mut rng, n, denom);
        let sol = solve(&mu, &nu, &d).unwrap();
        prop_assert!(sol.plan.couples(&mu, &nu));
        prop_assert_eq!(duality_gap(&sol.plan, &sol.certificate).unwrap(), zero());
        prop_assert_eq!(sol.certificate.lipschitz_violation(&d), None);
        prop_assert_eq!(sol.certificate.potentials.values().min().cloned(), Some(zero()));
        prop_assert_eq!(unit_split_oracle(&mu, &nu, &d, denom).unwrap(), sol.plan.cost().clone());
    }

    #[test]
    fn metric_axioms(seed in any::<u64>(), n in 2usize..9, denom in 1u32..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_connected(n, 0.3, seed);
        let d = all_pairs_distances(&g);
        let a = random_measure(&mut rng, n, denom);
        let b = random_measure(&mut rng, n, denom);
        let c = random_measure(&mut rng, n, denom);
        let w = |x: &VertexMeasure, y: &VertexMeasure| finite(wasserstein1(x, y, &d).cost());
        prop_assert_eq!(w(&a, &a), zero());
        prop_assert!(w(&a, &b) >= zero());
        prop_assert_eq!(w(&a, &b) == zero(), a == b);
        prop_assert_eq!(w(&a, &b), w(&b, &a));
        prop_assert!(w(&a, &c) <= w(&a, &b) + w(&b, &c));
    }

    #[test]
    fn directed_instances_certify_or_block(seed in any::<u64>(), n in 2usize..8, denom in 1u32..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_digraph(n, 0.35, seed);
        let d = all_pairs_distances(&g);
        let mu = random_measure(&mut rng, n, denom);
        let nu = random_measure(&mut rng, n, denom);
        match solve(&mu, &nu, &d) {
            Ok(sol) => {
                prop_assert_eq!(duality_gap(&sol.plan, &sol.certificate).unwrap(), zero());
                prop_assert_eq!(sol.certificate.lipschitz_violation(&d), None);
                prop_assert_eq!(unit_split_oracle(&mu, &nu, &d, denom).unwrap(), sol.plan.cost().clone());
            }
            Err(e) => {
                prop_assert_eq!(e, TransportError::InfeasibleTransport);
                prop_assert_eq!(unit_split_oracle(&mu, &nu, &d, denom), Err(TransportError::InfeasibleTransport));
            }
        }
    }
}
