//! Simple graphs and digraphs with positive rational edge weights.
//!
//! Vertices are dense ids `0..n`. External labels from input files live in a
//! side table and never affect the algorithms.

mod distance;
pub mod generate;
mod io;

pub use distance::{
    all_pairs_distances, all_pairs_distances_with, graph_distance, shortest_paths_from, DistanceTable, DistanceValue};
pub use io::{parse_edge_list, parse_graph_json, parse_graph_text, GraphJson, JsonEdge};

use crate::rational::{one, Rational};
use num_traits::{One, Signed};
use std::collections::VecDeque;
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(String),
    #[error("duplicate edge {0} -- {1}")]
    DuplicateEdge(String, String),
    #[error("edge {0} -- {1} has non-positive weight {2}")]
    NonpositiveWeight(String, String, String),
    #[error("malformed edge-list line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("vertex {0} out of range for a graph with {1} vertices")]
    VertexOutOfRange(Vertex, usize),
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(Vertex, Vertex),
    #[error("operation requires an undirected graph")]
    DirectedUnsupported,
    #[error("invalid probability: {0}")]
    InvalidProbability(String),
    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

/// In/out degree triple. For undirected graphs all three are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Degrees {
    /// Number of distinct vertices adjacent in either direction.
    pub total: usize,
    pub in_deg: usize,
    pub out_deg: usize,
}

/// An immutable simple graph or digraph.
///
/// Invariants: no self-loops, no parallel arcs, every weight is positive,
/// `in_adj` is the transpose of `out_adj`, and for undirected graphs the two
/// adjacency views are identical. Adjacency lists are sorted by neighbor id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    directed: bool,
    out_adj: Vec<Vec<(Vertex, Rational)>>,
    in_adj: Vec<Vec<(Vertex, Rational)>>,
    names: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph from `(u, v, weight)` triples. For undirected graphs each
    /// edge is listed once in either orientation.
    pub fn from_weighted_edges<I>(n: usize, directed: bool, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Rational)>,
    {
        let mut out_adj: Vec<Vec<(Vertex, Rational)>> = vec![Vec::new(); n];
        let mut in_adj: Vec<Vec<(Vertex, Rational)>> = vec![Vec::new(); n];
        for (u, v, w) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u.to_string()));
            }
            if !w.is_positive() {
                return Err(GraphError::NonpositiveWeight(u.to_string(), v.to_string(), w.to_string()));
            }
            out_adj[u].push((v, w.clone()));
            in_adj[v].push((u, w.clone()));
            if !directed {
                out_adj[v].push((u, w.clone()));
                in_adj[u].push((v, w));
            }
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_by_key(|(v, _)| *v);
        }
        for (u, list) in out_adj.iter().enumerate() {
            if let Some(pair) = list.windows(2).find(|p| p[0].0 == p[1].0) {
                return Err(GraphError::DuplicateEdge(u.to_string(), pair[0].0.to_string()));
            }
        }
        Ok(Self { n, directed, out_adj, in_adj, names: None })
    }

    /// Unit-weight graph from vertex pairs.
    pub fn from_edges(n: usize, directed: bool, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        Self::from_weighted_edges(n, directed, edges.iter().map(|&(u, v)| (u, v, one())))
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.n, "one name per vertex");
        self.names = Some(names);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// External label of `v`, or its id when the graph carries no labels.
    pub fn name(&self, v: Vertex) -> String {
        match &self.names {
            Some(names) => names[v].clone(),
            None => v.to_string(),
        }
    }

    /// True when some edge weight differs from 1.
    pub fn is_weighted(&self) -> bool {
        self.out_adj.iter().flatten().any(|(_, w)| !w.is_one())
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange(v, self.n))
        }
    }

    /// Out-neighbors (all neighbors when undirected) with weights.
    pub fn out_edges(&self, v: Vertex) -> &[(Vertex, Rational)] {
        &self.out_adj[v]
    }

    pub fn in_edges(&self, v: Vertex) -> &[(Vertex, Rational)] {
        &self.in_adj[v]
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.out_adj[v].iter().map(|(u, _)| *u)
    }

    pub fn in_neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.in_adj[v].iter().map(|(u, _)| *u)
    }

    /// Whether the arc `u -> v` (or edge `{u, v}`) exists.
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.out_adj[u].binary_search_by_key(&v, |(x, _)| *x).is_ok()
    }

    pub fn weight(&self, u: Vertex, v: Vertex) -> Option<&Rational> {
        let list = self.out_adj.get(u)?;
        list.binary_search_by_key(&v, |(x, _)| *x).ok().map(|i| &list[i].1)
    }

    /// Edges in canonical order: `(u, v)` with `u < v` for undirected graphs,
    /// every arc for digraphs, sorted lexicographically.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for (v, _) in &self.out_adj[u] {
                if self.directed || u < *v {
                    out.push((u, *v));
                }
            }
        }
        out
    }

    pub fn weighted_edges(&self) -> Vec<(Vertex, Vertex, Rational)> {
        self.edges()
            .into_iter()
            .map(|(u, v)| {
                let w = self.weight(u, v).cloned().expect("listed edge");
                (u, v, w)
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        let arcs: usize = self.out_adj.iter().map(Vec::len).sum();
        if self.directed {
            arcs
        } else {
            arcs / 2
        }
    }

    pub fn degrees(&self, v: Vertex) -> Degrees {
        let out_deg = self.out_adj[v].len();
        let in_deg = self.in_adj[v].len();
        let total = if self.directed {
            let mut all: Vec<Vertex> = self.neighbors(v).chain(self.in_neighbors(v)).collect();
            all.sort_unstable();
            all.dedup();
            all.len()
        } else {
            out_deg
        };
        Degrees { total, in_deg, out_deg }
    }

    /// Degree used by the undirected measures: `|N(v)|`.
    pub fn degree(&self, v: Vertex) -> usize {
        self.out_adj[v].len()
    }

    /// Number of common neighbors of the edge `(u, v)`, i.e. triangles on it.
    pub fn triangle_count(&self, u: Vertex, v: Vertex) -> Result<usize, GraphError> {
        if self.directed {
            return Err(GraphError::DirectedUnsupported);
        }
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.has_edge(u, v) {
            return Err(GraphError::NotAnEdge(u, v));
        }
        let (a, b) = (&self.out_adj[u], &self.out_adj[v]);
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(count)
    }

    /// The same graph with every weight reset to 1 and arcs forgotten.
    pub fn underlying_undirected(&self) -> Graph {
        let mut pairs: Vec<(Vertex, Vertex)> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let mut g = Graph::from_edges(self.n, false, &pairs).expect("underlying graph of a simple graph is simple");
        g.names = self.names.clone();
        g
    }

    /// Same vertex set and labels, new weighted edge set.
    pub fn with_edges<I>(&self, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Rational)>,
    {
        let mut g = Graph::from_weighted_edges(self.n, self.directed, edges)?;
        g.names = self.names.clone();
        Ok(g)
    }

    /// Connected components of the underlying undirected graph. Labels are
    /// dense and assigned in order of the smallest vertex of each component.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for u in self.neighbors(v).chain(self.in_neighbors(v)) {
                    if label[u] == usize::MAX {
                        label[u] = next;
                        queue.push_back(u);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::{complete, path, star};

    #[test]
    fn triangle_counts() {
        let k3 = complete(3);
        assert_eq!(k3.triangle_count(0, 1).unwrap(), 1);
        assert_eq!(path(3).triangle_count(0, 1).unwrap(), 0);
        let k4 = complete(4);
        // common neighbors of 0 and 1 in K4 are {2, 3}
        assert_eq!(k4.triangle_count(0, 1).unwrap(), 2);
        assert_eq!(k4.triangle_count(1, 0).unwrap(), 2);
        assert_eq!(path(3).triangle_count(0, 2), Err(GraphError::NotAnEdge(0, 2)));
        let d = Graph::from_edges(2, true, &[(0, 1)]).unwrap();
        assert_eq!(d.triangle_count(0, 1), Err(GraphError::DirectedUnsupported));
    }

    #[test]
    fn degrees_of_small_graphs() {
        let k3 = complete(3);
        for v in 0..3 {
            assert_eq!(k3.degrees(v), Degrees { total: 2, in_deg: 2, out_deg: 2 });
        }
        let d = Graph::from_edges(2, true, &[(0, 1)]).unwrap();
        assert_eq!(d.degrees(0), Degrees { total: 1, in_deg: 0, out_deg: 1 });
        assert_eq!(d.degrees(1), Degrees { total: 1, in_deg: 1, out_deg: 0 });
        assert_eq!(star(4).degrees(0).total, 4);
    }

    #[test]
    fn simplicity_is_enforced() {
        assert!(matches!(Graph::from_edges(2, false, &[(0, 0)]), Err(GraphError::SelfLoop(_))));
        assert!(matches!(
            Graph::from_edges(2, false, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(..))
        ));
        assert!(Graph::from_edges(2, true, &[(0, 1), (1, 0)]).is_ok());
        assert!(matches!(
            Graph::from_edges(2, true, &[(0, 1), (0, 1)]),
            Err(GraphError::DuplicateEdge(..))
        ));
        assert!(matches!(
            Graph::from_weighted_edges(2, false, [(0, 1, crate::rational::zero())]),
            Err(GraphError::NonpositiveWeight(..))
        ));
    }

    #[test]
    fn in_adjacency_is_transpose() {
        let g = Graph::from_edges(4, true, &[(0, 1), (1, 2), (2, 0), (3, 0)]).unwrap();
        for (u, v) in g.edges() {
            assert!(g.in_neighbors(v).any(|x| x == u));
        }
        let total_in: usize = (0..4).map(|v| g.in_edges(v).len()).sum();
        assert_eq!(total_in, g.edge_count());
    }

    #[test]
    fn components_label_in_vertex_order() {
        let g = Graph::from_edges(5, false, &[(0, 3), (1, 2)]).unwrap();
        assert_eq!(g.components(), vec![0, 1, 1, 0, 2]);
        assert_eq!(g.component_count(), 3);
        assert!(!g.is_connected());
    }
}
