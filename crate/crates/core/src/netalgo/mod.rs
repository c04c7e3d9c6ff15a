//! Curvature-driven network algorithms: Ricci-flow clustering, clustering by
//! removing negatively curved edges, curvature-guided rewiring, and the
//! partition metrics they report.

mod flow;
mod removal;
mod rewire;

pub use flow::{quantize_weights, ricci_flow_weights, threshold_sweep_cluster, FlowParams, FlowTrajectory, WEIGHT_GRID_BITS};
pub use removal::{negative_edge_removal_cluster, RemovalParams};
pub use rewire::{curvature_rewire, RewireParams, RewireReport};

use crate::curvature::CurvatureError;
use crate::graph::{Graph, GraphError, Vertex};
use crate::rational::{to_f64, Rational};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("weight of ({u}, {v}) became nonpositive at iteration {iteration}")]
    NonpositiveWeight { iteration: usize, u: Vertex, v: Vertex },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("labelings have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("directed graphs are not supported here")]
    DirectedUnsupported,
    #[error("graph is disconnected")]
    Disconnected,
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A partition of the vertex set into communities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommunityAssignment {
    /// Community of each vertex; ids are dense and numbered in order of each
    /// community's smallest vertex.
    pub labels: Vec<usize>,
    pub modularity: f64,
    pub num_communities: usize,
}

impl CommunityAssignment {
    /// Relabels densely and scores the partition against `g`. A graph without
    /// edges scores 0.
    pub fn new(g: &Graph, labels: &[usize]) -> Self {
        let labels = canonical_labels(labels);
        let num_communities = labels.iter().max().map_or(0, |m| m + 1);
        let modularity = modularity(g, &labels).unwrap_or(0.0);
        Self { labels, modularity, num_communities }
    }
}

/// Dense relabeling in order of first appearance.
pub fn canonical_labels(labels: &[usize]) -> Vec<usize> {
    let mut ids = BTreeMap::new();
    labels
        .iter()
        .map(|l| {
            let next = ids.len();
            *ids.entry(*l).or_insert(next)
        })
        .collect()
}

/// Newman-Girvan modularity `sum_c (e_c / m - (a_c / 2m)^2)` of an
/// unweighted undirected graph, exact.
pub fn modularity_exact(g: &Graph, labels: &[usize]) -> Result<Rational, NetError> {
    if labels.len() != g.n() {
        return Err(NetError::LengthMismatch(labels.len(), g.n()));
    }
    if g.is_directed() {
        return Err(NetError::DirectedUnsupported);
    }
    let m = g.edge_count();
    if m == 0 {
        return Err(NetError::EmptyGraph);
    }
    let mut inside: BTreeMap<usize, i64> = BTreeMap::new();
    let mut degree: BTreeMap<usize, i64> = BTreeMap::new();
    for (u, v) in g.edges() {
        if labels[u] == labels[v] {
            *inside.entry(labels[u]).or_default() += 1;
        }
        *degree.entry(labels[u]).or_default() += 1;
        *degree.entry(labels[v]).or_default() += 1;
    }
    let m = m as i64;
    let mut q = Rational::zero();
    for (c, a) in degree {
        let e = inside.get(&c).copied().unwrap_or(0);
        q += Rational::new(e.into(), m.into()) - Rational::new((a * a).into(), (4 * m * m).into());
    }
    Ok(q)
}

pub fn modularity(g: &Graph, labels: &[usize]) -> Result<f64, NetError> {
    modularity_exact(g, labels).map(|q| to_f64(&q))
}

fn choose2(k: u64) -> f64 {
    (k as f64) * (k.saturating_sub(1) as f64) / 2.0
}

/// Adjusted Rand index of two labelings of the same vertices.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64, NetError> {
    if a.len() != b.len() {
        return Err(NetError::LengthMismatch(a.len(), b.len()));
    }
    let mut table: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut rows: BTreeMap<usize, u64> = BTreeMap::new();
    let mut cols: BTreeMap<usize, u64> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = table.values().map(|&k| choose2(k)).sum();
    let sum_a: f64 = rows.values().map(|&k| choose2(k)).sum();
    let sum_b: f64 = cols.values().map(|&k| choose2(k)).sum();
    let total = choose2(a.len() as u64);
    let expected = if total > 0.0 { sum_a * sum_b / total } else { 0.0 };
    let max = (sum_a + sum_b) / 2.0;
    if max == expected {
        // Both partitions trivial in the same way (all singletons or one block).
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}

fn require_undirected(g: &Graph) -> Result<(), NetError> {
    if g.is_directed() {
        Err(NetError::DirectedUnsupported)
    } else {
        Ok(())
    }
}
