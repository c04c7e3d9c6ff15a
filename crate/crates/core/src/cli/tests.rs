use super::*;
use crate::curvature::orc_alpha;
use crate::graph::generate::{complete, path};
use crate::rational::{rat, zero};

#[test]
fn dot_labels() {
    let k3 = complete(3);
    let recs: Vec<_> = k3.edges().iter().map(|&(u, v)| orc_alpha(&k3, u, v, &zero()).unwrap()).collect();
    let dot = export_dot(&k3, &recs);
    assert!(dot.starts_with("graph curvature {"));
    assert_eq!(dot.matches("label=\"0.5\"").count(), 3);

    let e = path(2);
    let rec = orc_alpha(&e, 0, 1, &rat(1, 2)).unwrap();
    assert!(export_dot(&e, &[rec]).contains("label=\"1.0\""));

    let bare = export_dot(&k3, &[]);
    assert!(bare.contains("0 -- 1;") && !bare.contains("color"));
}

#[test]
fn dot_directed_arrows() {
    let g = Graph::from_edges(3, true, &[(0, 1), (1, 2), (2, 0)]).unwrap();
    let rec = crate::directed::directed_orc(&g, 0, 1, &zero()).unwrap();
    let dot = export_dot(&g, &[rec]);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("0 -> 1 [label=\"0.0\""));
    assert!(dot.contains("1 -> 2;"));
}

#[test]
fn color_scale_saturates() {
    assert_eq!(render::curvature_color(&rat(-3, 1)), "#2166ac");
    assert_eq!(render::curvature_color(&rat(-1, 1)), "#2166ac");
    assert_eq!(render::curvature_color(&zero()), "#f7f7f7");
    assert_eq!(render::curvature_color(&rat(5, 1)), "#b2182b");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run_from(["ricci", "frobnicate"]), EXIT_USAGE);
    assert_eq!(run_from(["ricci", "curvature", "--alpha", "1/2"]), EXIT_USAGE);
    assert_eq!(run_from(["ricci", "curvature", "--input", "x", "--alpha", "one half"]), EXIT_USAGE);
}

#[test]
fn error_json_shape() {
    let e = CliError::from(GraphError::SelfLoop("a".into()));
    let v: Value = serde_json::from_str(&e.to_json()).unwrap();
    assert_eq!(v["error"]["kind"], "graph");
    assert!(v["error"]["message"].as_str().unwrap().contains("self-loop"));
}

#[test]
fn random_measures_are_probabilities() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let m = random_measure(&mut rng, 5);
        assert_eq!(m.total(), one());
        assert!(m.support().all(|v| v < 5));
    }
}
