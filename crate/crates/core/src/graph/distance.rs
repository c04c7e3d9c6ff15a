use super::{Graph, Vertex};
use crate::rational::{format_rational, int, Rational};
use num_traits::Zero;
use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;

/// Length of a shortest (di)path, or `Unreachable` when none exists.
///
/// `Finite` orders before `Unreachable`, so the derived ordering treats
/// unreachable as +infinity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DistanceValue {
    Finite(Rational),
    Unreachable,
}

impl DistanceValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            DistanceValue::Finite(r) => Some(r),
            DistanceValue::Unreachable => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, DistanceValue::Finite(_))
    }
}

impl fmt::Display for DistanceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceValue::Finite(r) => f.write_str(&format_rational(r)),
            DistanceValue::Unreachable => f.write_str("unreachable"),
        }
    }
}

/// Shortest-path lengths from `source` to every vertex, respecting arc
/// direction. BFS hop counts on unit-weight graphs, Dijkstra otherwise.
pub fn shortest_paths_from(g: &Graph, source: Vertex) -> Vec<DistanceValue> {
    if g.is_weighted() {
        dijkstra(g, source)
    } else {
        bfs(g, source)
    }
}

fn bfs(g: &Graph, source: Vertex) -> Vec<DistanceValue> {
    let mut hops: Vec<Option<i64>> = vec![None; g.n()];
    hops[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let next = hops[v].expect("queued vertices are labeled") + 1;
        for u in g.neighbors(v) {
            if hops[u].is_none() {
                hops[u] = Some(next);
                queue.push_back(u);
            }
        }
    }
    hops.into_iter()
        .map(|h| h.map_or(DistanceValue::Unreachable, |h| DistanceValue::Finite(int(h))))
        .collect()
}

#[derive(PartialEq, Eq)]
struct HeapItem {
    dist: Rational,
    vertex: Vertex,
}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.cmp(&self.dist).then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(g: &Graph, source: Vertex) -> Vec<DistanceValue> {
    let mut dist: Vec<Option<Rational>> = vec![None; g.n()];
    let mut done = vec![false; g.n()];
    dist[source] = Some(Rational::zero());
    let mut heap = BinaryHeap::from([HeapItem { dist: Rational::zero(), vertex: source }]);
    while let Some(HeapItem { dist: d, vertex: v }) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        for (u, w) in g.out_edges(v) {
            let candidate = &d + w;
            let better = match &dist[*u] {
                Some(current) => candidate < *current,
                None => true,
            };
            if better {
                dist[*u] = Some(candidate.clone());
                heap.push(HeapItem { dist: candidate, vertex: *u });
            }
        }
    }
    dist.into_iter()
        .map(|d| d.map_or(DistanceValue::Unreachable, DistanceValue::Finite))
        .collect()
}

pub fn graph_distance(g: &Graph, u: Vertex, v: Vertex) -> DistanceValue {
    shortest_paths_from(g, u).swap_remove(v)
}

/// Dense all-pairs distance table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    rows: Vec<Vec<DistanceValue>>,
}

impl DistanceTable {
    pub fn get(&self, u: Vertex, v: Vertex) -> &DistanceValue {
        &self.rows[u][v]
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, u: Vertex) -> &[DistanceValue] {
        &self.rows[u]
    }

    /// Largest finite entry; `None` if any pair is unreachable or the table is empty.
    pub fn diameter(&self) -> Option<Rational> {
        let mut best: Option<Rational> = None;
        for row in &self.rows {
            for d in row {
                let d = d.finite()?;
                if best.as_ref().is_none_or(|b| d > b) {
                    best = Some(d.clone());
                }
            }
        }
        best
    }
}

pub fn all_pairs_distances(g: &Graph) -> DistanceTable {
    all_pairs_distances_with(g, crate::par::Execution::default())
}

pub fn all_pairs_distances_with(g: &Graph, exec: crate::par::Execution) -> DistanceTable {
    let rows = crate::par::map_range(g.n(), exec, |u| shortest_paths_from(g, u));
    DistanceTable { rows }
}
