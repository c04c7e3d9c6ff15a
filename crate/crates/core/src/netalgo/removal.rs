use super::{require_undirected, CommunityAssignment, NetError};
use crate::curvature::orc_alpha;
use crate::graph::{Graph, Vertex};
use crate::par::{self, Execution};
use crate::rational::Rational;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq)]
pub struct RemovalParams {
    pub alpha: Rational,
    /// Components smaller than this are not counted as communities and are
    /// merged into a neighboring community at the end.
    pub min_size: usize,
    /// Stop once this many communities exist; `None` removes negative edges
    /// until none is left.
    pub target_communities: Option<usize>,
}

impl Default for RemovalParams {
    fn default() -> Self {
        Self { alpha: Rational::zero(), min_size: 1, target_communities: None }
    }
}

fn counted_components(g: &Graph, min_size: usize) -> usize {
    let labels = g.components();
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for l in labels {
        *sizes.entry(l).or_default() += 1;
    }
    sizes.values().filter(|&&s| s >= min_size.max(1)).count()
}

fn closed_neighborhood(g: &Graph, vs: &[Vertex]) -> BTreeSet<Vertex> {
    vs.iter().flat_map(|&v| std::iter::once(v).chain(g.neighbors(v))).collect()
}

/// Removes the most negatively curved edge (ties to the smallest `(u, v)`)
/// until no negative edge remains or the target community count is reached.
/// After each removal only the edges touching the closed neighborhoods of the
/// removed edge's endpoints are recomputed: every other edge keeps its step
/// measures and all distances between their supports, which are at most 3.
pub fn negative_edge_removal_cluster(g: &Graph, p: &RemovalParams, exec: Execution) -> Result<CommunityAssignment, NetError> {
    removal(g, p, exec, false)
}

pub(super) fn removal(g: &Graph, p: &RemovalParams, exec: Execution, full_recompute: bool) -> Result<CommunityAssignment, NetError> {
    require_undirected(g)?;
    if g.n() == 0 {
        return Ok(CommunityAssignment::new(g, &[]));
    }
    let curvature_of = |h: &Graph, edges: &[(Vertex, Vertex)]| -> Result<Vec<((Vertex, Vertex), Rational)>, NetError> {
        par::map(edges, exec, |&(u, v)| {
            let r = orc_alpha(h, u, v, &p.alpha)?;
            Ok(((u, v), r.kappa.expect("adjacent vertices always couple")))
        })
        .into_iter()
        .collect()
    };
    let mut current = g.clone();
    let mut kappa: BTreeMap<(Vertex, Vertex), Rational> = curvature_of(&current, &current.edges())?.into_iter().collect();
    loop {
        if let Some(t) = p.target_communities {
            if counted_components(&current, p.min_size) >= t {
                break;
            }
        }
        let worst = kappa
            .iter()
            .filter(|(_, k)| k.is_negative())
            .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(b.0)))
            .map(|(e, _)| *e);
        let Some((u, v)) = worst else { break };
        let touched = closed_neighborhood(&current, &[u, v]);
        kappa.remove(&(u, v));
        current = current.with_edges(current.weighted_edges().into_iter().filter(|&(a, b, _)| (a, b) != (u, v)))?;
        let stale: Vec<(Vertex, Vertex)> = if full_recompute {
            current.edges()
        } else {
            current.edges().into_iter().filter(|(a, b)| touched.contains(a) || touched.contains(b)).collect()
        };
        kappa.extend(curvature_of(&current, &stale)?);
    }
    let labels = merge_small(g, &current.components(), p.min_size);
    Ok(CommunityAssignment::new(g, &labels))
}

/// Repeatedly merges the smallest component below `min_size` into the
/// community it shares the most edges of `g` with (ties to the smaller id).
/// Components with no such edges stay as they are.
fn merge_small(g: &Graph, labels: &[usize], min_size: usize) -> Vec<usize> {
    let mut labels = labels.to_vec();
    let mut isolated: BTreeSet<usize> = BTreeSet::new();
    loop {
        let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
        for &l in &labels {
            *sizes.entry(l).or_default() += 1;
        }
        let small = sizes
            .iter()
            .filter(|(l, &s)| s < min_size && !isolated.contains(l))
            .min_by_key(|(l, &s)| (s, **l))
            .map(|(l, _)| *l);
        let Some(small) = small else { break };
        let mut links: BTreeMap<usize, usize> = BTreeMap::new();
        for (u, v) in g.edges() {
            let (a, b) = (labels[u], labels[v]);
            if a == small && b != small {
                *links.entry(b).or_default() += 1;
            } else if b == small && a != small {
                *links.entry(a).or_default() += 1;
            }
        }
        match links.iter().max_by(|x, y| x.1.cmp(y.1).then(y.0.cmp(x.0))) {
            Some((&into, _)) => labels.iter_mut().filter(|l| **l == small).for_each(|l| *l = into),
            None => {
                isolated.insert(small);
            }
        }
    }
    labels
}
