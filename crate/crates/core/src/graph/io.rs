//! Edge-list and JSON graph formats.
//!
//! Edge list: one `u<TAB>v[<TAB>w]` per line, any whitespace accepted as a
//! separator, `#` starts a comment. A line holding a single label declares a
//! vertex without edges. Vertex ids follow first appearance.

use super::{Graph, GraphError, Vertex};
use crate::rational::{format_rational, one, parse_rational, Rational};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

pub fn parse_edge_list(text: &str, directed: bool) -> Result<Graph, GraphError> {
    let mut ids: HashMap<String, Vertex> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut intern = |label: &str, names: &mut Vec<String>| -> Vertex {
        *ids.entry(label.to_string()).or_insert_with(|| {
            names.push(label.to_string());
            names.len() - 1
        })
    };
    let mut edges: Vec<(Vertex, Vertex, Rational)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields.as_slice() {
            [label] => {
                intern(label, &mut names);
            }
            [a, b, rest @ ..] if rest.len() <= 1 => {
                if a == b {
                    return Err(GraphError::SelfLoop(a.to_string()));
                }
                let w = match rest.first() {
                    Some(w) => parse_rational(w).map_err(|e| GraphError::MalformedLine {
                        line: line_no,
                        reason: e.to_string(),
                    })?,
                    None => one(),
                };
                let u = intern(a, &mut names);
                let v = intern(b, &mut names);
                if w <= crate::rational::zero() {
                    return Err(GraphError::NonpositiveWeight(a.to_string(), b.to_string(), format_rational(&w)));
                }
                edges.push((u, v, w));
            }
            _ => {
                return Err(GraphError::MalformedLine {
                    line: line_no,
                    reason: format!("expected `u v [w]`, found {} fields", fields.len()),
                })
            }
        }
    }
    let n = names.len();
    let g = Graph::from_weighted_edges(n, directed, edges).map_err(|e| relabel(e, &names))?;
    Ok(g.with_names(names))
}

fn relabel(e: GraphError, names: &[String]) -> GraphError {
    let name = |s: &str| s.parse::<usize>().ok().and_then(|i| names.get(i).cloned()).unwrap_or_else(|| s.to_string());
    match e {
        GraphError::DuplicateEdge(a, b) => GraphError::DuplicateEdge(name(&a), name(&b)),
        GraphError::SelfLoop(a) => GraphError::SelfLoop(name(&a)),
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonEdge {
    pub u: Vertex,
    pub v: Vertex,
    #[serde(with = "crate::rational::serde_rational")]
    pub w: Rational,
}

/// `{n, directed, edges: [{u, v, w}], names?}` with weights as `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub directed: bool,
    pub edges: Vec<JsonEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

pub fn parse_graph_json(text: &str) -> Result<Graph, GraphError> {
    let dump: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
    Graph::try_from(dump)
}

/// Accepts either format: JSON when the first non-blank character is `{`.
pub fn parse_graph_text(text: &str, directed: bool) -> Result<Graph, GraphError> {
    if text.trim_start().starts_with('{') {
        let g = parse_graph_json(text)?;
        if g.is_directed() != directed && directed {
            return Err(GraphError::Json("JSON graph is undirected but --directed was requested".into()));
        }
        Ok(g)
    } else {
        parse_edge_list(text, directed)
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(dump: GraphJson) -> Result<Self, GraphError> {
        let g = Graph::from_weighted_edges(dump.n, dump.directed, dump.edges.into_iter().map(|e| (e.u, e.v, e.w)))?;
        match dump.names {
            Some(names) if names.len() != dump.n => Err(GraphError::Json(format!(
                "{} names for {} vertices",
                names.len(),
                dump.n
            ))),
            Some(names) => Ok(g.with_names(names)),
            None => Ok(g),
        }
    }
}

impl Graph {
    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n(),
            directed: self.is_directed(),
            edges: self.weighted_edges().into_iter().map(|(u, v, w)| JsonEdge { u, v, w }).collect(),
            names: self.names().map(<[String]>::to_vec),
        }
    }

    /// Edge-list text. Unit weights are omitted; vertices without edges get a
    /// single-label line so the vertex set survives a round trip.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let mut seen = vec![false; self.n()];
        // Declare vertices in id order first when needed, so ids survive a reparse.
        let edges = self.weighted_edges();
        let mut order_ok = true;
        let mut next = 0;
        for (u, v, _) in &edges {
            for x in [*u, *v] {
                if !seen[x] {
                    if x != next {
                        order_ok = false;
                    }
                    seen[x] = true;
                    next += 1;
                }
            }
        }
        if !order_ok || next != self.n() {
            for v in 0..self.n() {
                out.push_str(&self.name(v));
                out.push('\n');
            }
        }
        for (u, v, w) in edges {
            out.push_str(&self.name(u));
            out.push('\t');
            out.push_str(&self.name(v));
            if w != one() {
                out.push('\t');
                out.push_str(&format_rational(&w));
            }
            out.push('\n');
        }
        out
    }
}
