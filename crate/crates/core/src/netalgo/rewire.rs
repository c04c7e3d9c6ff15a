use super::{require_undirected, NetError};
use crate::curvature::{edge_curvatures, CurvatureEngine};
use crate::graph::{Graph, Vertex};
use crate::par::Execution;
use crate::rational::{one, to_f64, Rational};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq)]
pub struct RewireParams {
    /// Use the mean +- one standard deviation thresholds instead of `h`, `l`.
    pub heuristic: bool,
    pub add: usize,
    pub remove: usize,
    pub alpha: Rational,
    pub seed: u64,
}

impl Default for RewireParams {
    fn default() -> Self {
        Self { heuristic: false, add: 0, remove: 0, alpha: Rational::zero(), seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RewireReport {
    pub graph: Graph,
    pub added: Vec<(Vertex, Vertex)>,
    pub removed: Vec<(Vertex, Vertex)>,
    /// The rewired graph has more components than the input.
    pub disconnected: bool,
}

/// Curvature-guided rewiring. For a low-curvature edge `(u, v)` a new edge
/// `(w, v)` is added with `w` drawn uniformly from `N(u) \ N(v)`, excluding
/// `v` and pairs already added; high-curvature edges are removed. Edges are
/// visited by increasing (for additions) or decreasing (for removals)
/// curvature, ties by `(u, v)`.
pub fn curvature_rewire(g: &Graph, p: &RewireParams, exec: Execution) -> Result<RewireReport, NetError> {
    require_undirected(g)?;
    let engine = CurvatureEngine::with_execution(g, exec);
    let kappa = edge_curvatures(&engine, &p.alpha, exec)?;
    let mut ascending: Vec<((Vertex, Vertex), Rational)> = kappa.into_iter().collect();
    ascending.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));

    let (add_from, remove): (Vec<(Vertex, Vertex)>, Vec<(Vertex, Vertex)>) = if p.heuristic {
        let values: Vec<f64> = ascending.iter().map(|(_, k)| to_f64(k)).collect();
        let n = values.len().max(1) as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = (values.iter().map(|k| (k - mean).powi(2)).sum::<f64>() / n).sqrt();
        let (lower, upper) = (mean - std, mean + std);
        (
            ascending.iter().zip(&values).filter(|(_, &k)| k < lower).map(|(e, _)| e.0).collect(),
            ascending.iter().zip(&values).filter(|(_, &k)| k > upper).map(|(e, _)| e.0).collect(),
        )
    } else {
        (
            ascending.iter().map(|e| e.0).collect(),
            ascending.iter().rev().take(p.remove).map(|e| e.0).collect(),
        )
    };
    let quota = if p.heuristic { usize::MAX } else { p.add };

    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut added: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut added_order = Vec::new();
    for (u, v) in add_from {
        if added_order.len() == quota {
            break;
        }
        let candidates: Vec<Vertex> = g
            .neighbors(u)
            .filter(|&w| w != v && !g.has_edge(w, v) && !added.contains(&(w.min(v), w.max(v))))
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let w = candidates[rng.random_range(0..candidates.len())];
        added.insert((w.min(v), w.max(v)));
        added_order.push((w, v));
    }
    let dropped: BTreeSet<(Vertex, Vertex)> = remove.iter().copied().collect();
    let edges = g
        .weighted_edges()
        .into_iter()
        .filter(|&(u, v, _)| !dropped.contains(&(u, v)))
        .chain(added.iter().map(|&(a, b)| (a, b, one())));
    let graph = g.with_edges(edges)?;
    let disconnected = graph.component_count() > g.component_count();
    let mut removed = remove;
    removed.sort_unstable();
    Ok(RewireReport { graph, added: added_order, removed, disconnected })
}
