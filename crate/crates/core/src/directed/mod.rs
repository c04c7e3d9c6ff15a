//! Curvature on digraphs: arc curvature under the out-degree walk, a
//! phase-based heuristic transport plan, effective cycle length, the
//! directed 3-cycle transport bounds, and branching-tree classification.

use crate::curvature::{self, CurvatureEngine, CurvatureError, CurvatureRecord, EdgeCurvature, SweepMode};
use crate::graph::{DistanceValue, Graph, GraphError, Vertex};
use crate::measures::{yamada_measure, MeasureError};
use crate::par::Execution;
use crate::rational::{int, one, Rational};
use crate::transport::{self, GroundDistance, TransportError, TransportPlan};
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DirectedError {
    #[error("operation requires a directed graph")]
    UndirectedGraph,
    #[error("({0}, {1}) is not an arc")]
    NotAnArc(Vertex, Vertex),
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("both arcs between {0} and {1} are present")]
    AmbiguousBidirectedEdge(Vertex, Vertex),
    #[error("mass at {0} has no finite-cost destination")]
    Infeasible(Vertex),
    #[error("the 3-cycle plan does not apply: 1 - 1/d_in - 1/d_out - #/min(d_in, d_out) = {0} < 0")]
    FeasibilityViolated(Rational),
    #[error("degrees must be positive")]
    ZeroDegree,
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Transport(#[from] TransportError),
}

fn require_directed(g: &Graph) -> Result<(), DirectedError> {
    if g.is_directed() {
        Ok(())
    } else {
        Err(DirectedError::UndirectedGraph)
    }
}

fn require_arc(g: &Graph, x: Vertex, y: Vertex) -> Result<(), DirectedError> {
    require_directed(g)?;
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if g.has_edge(x, y) {
        Ok(())
    } else {
        Err(DirectedError::NotAnArc(x, y))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleOrientationProfile {
    pub cycle: Vec<Vertex>,
    pub forward_count: usize,
    pub backward_count: usize,
    pub effective_length: usize,
}

/// Forward and backward arc counts along a closed vertex sequence.
pub fn effective_length(g: &Graph, cycle: &[Vertex]) -> Result<CycleOrientationProfile, DirectedError> {
    require_directed(g)?;
    if cycle.len() < 3 {
        return Err(DirectedError::NotACycle(format!("{} vertices, need at least 3", cycle.len())));
    }
    let mut seen = cycle.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != cycle.len() {
        return Err(DirectedError::NotACycle("repeated vertex".into()));
    }
    let (mut forward_count, mut backward_count) = (0, 0);
    for (i, &a) in cycle.iter().enumerate() {
        g.check_vertex(a)?;
        let b = cycle[(i + 1) % cycle.len()];
        g.check_vertex(b)?;
        match (g.has_edge(a, b), g.has_edge(b, a)) {
            (true, true) => return Err(DirectedError::AmbiguousBidirectedEdge(a, b)),
            (true, false) => forward_count += 1,
            (false, true) => backward_count += 1,
            (false, false) => return Err(DirectedError::NotACycle(format!("no arc between {a} and {b}"))),
        }
    }
    Ok(CycleOrientationProfile {
        cycle: cycle.to_vec(),
        forward_count,
        backward_count,
        effective_length: forward_count.abs_diff(backward_count),
    })
}

/// Curvature of the arc `x -> y`: `1 - W1(m_x, m_y) / d(x, y)` with the
/// out-degree walk and shortest-dipath costs. `kappa` is `None` when the
/// transport is blocked.
pub fn directed_orc(g: &Graph, x: Vertex, y: Vertex, alpha: &Rational) -> Result<CurvatureRecord, DirectedError> {
    require_arc(g, x, y)?;
    Ok(curvature::record_with(g, x, y, alpha, &curvature::source_rows(g, x), false)?)
}

/// Curvature of every arc, in arc order.
pub fn directed_sweep(g: &Graph, alpha: &Rational, exec: Execution) -> Result<Vec<EdgeCurvature>, DirectedError> {
    require_directed(g)?;
    let engine = CurvatureEngine::with_execution(g, exec);
    Ok(curvature::sweep_with(&engine, &SweepMode::Orc(alpha.clone()), false, exec))
}

/// A runtime check of one of the per-phase cost statements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimCheck {
    /// 1: unit cost moves next to `x` and `y`; 2: filling a common
    /// out-neighbor costs 2 to 3; 3: filling an out-neighbor of `y` only
    /// costs 3 to 4.
    pub claim: u8,
    pub source: Vertex,
    pub target: Vertex,
    pub cost: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeuristicPlan {
    pub plan: TransportPlan,
    /// Whether `x -> y` lies on a directed 3-cycle.
    pub in_three_cycle: bool,
    pub checks: Vec<ClaimCheck>,
}

struct PlanBuilder<'a, D: GroundDistance + ?Sized> {
    d: &'a D,
    supply: BTreeMap<Vertex, Rational>,
    demand: BTreeMap<Vertex, Rational>,
    moves: Vec<(Vertex, Vertex, Rational)>,
}

impl<D: GroundDistance + ?Sized> PlanBuilder<'_, D> {
    fn remaining(map: &BTreeMap<Vertex, Rational>, v: Vertex) -> Rational {
        map.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    /// Moves as much as possible from `s` to `t`; returns the amount.
    fn transfer(&mut self, s: Vertex, t: Vertex) -> Rational {
        let amount = Self::remaining(&self.supply, s).min(Self::remaining(&self.demand, t));
        if amount.is_positive() {
            *self.supply.get_mut(&s).expect("positive supply") -= &amount;
            *self.demand.get_mut(&t).expect("positive demand") -= &amount;
            self.moves.push((s, t, amount.clone()));
        }
        amount
    }

    fn cost(&self, s: Vertex, t: Vertex) -> Option<Rational> {
        self.d.distance(s, t).finite().cloned()
    }
}

/// Feasible transport plan built in phases:
/// mass already in place stays; `m_x` mass at `y` moves to `y`'s
/// out-neighbors; demand at `x` is filled from `x`'s out-neighbors; any
/// remaining demand is filled greedily from the nearest source, preferring
/// `x`'s in-neighbors, then `x`, then `y`.
pub fn directed_heuristic_plan(g: &Graph, x: Vertex, y: Vertex, alpha: &Rational) -> Result<HeuristicPlan, DirectedError> {
    require_arc(g, x, y)?;
    let sink = |e: MeasureError| match e {
        MeasureError::SinkVertex(v) => DirectedError::Infeasible(v),
        e => e.into(),
    };
    let mx = yamada_measure(g, x, alpha).map_err(sink)?;
    let my = yamada_measure(g, y, alpha).map_err(sink)?;
    let d = curvature::source_rows(g, x);
    let mut b = PlanBuilder {
        d: &d,
        supply: mx.iter().map(|(v, m)| (v, m.clone())).collect(),
        demand: my.iter().map(|(v, m)| (v, m.clone())).collect(),
        moves: Vec::new(),
    };
    let mut checks = Vec::new();
    let out_x: Vec<Vertex> = g.neighbors(x).collect();
    let out_y: Vec<Vertex> = g.neighbors(y).collect();
    let in_x: Vec<Vertex> = g.in_neighbors(x).collect();
    let in_three_cycle = out_y.iter().any(|z| g.has_edge(*z, x));

    let shared: Vec<Vertex> = b.supply.keys().filter(|v| b.demand.contains_key(v)).copied().collect();
    for v in shared {
        b.transfer(v, v);
    }
    for &w in &out_y {
        if b.transfer(y, w).is_positive() {
            let c = b.cost(y, w).expect("arc");
            checks.push(ClaimCheck { claim: 1, source: y, target: w, holds: c == one(), cost: c.to_string() });
        }
    }
    let mut into_x: Vec<(Rational, Vertex)> = out_x.iter().filter_map(|&w| b.cost(w, x).map(|c| (c, w))).collect();
    into_x.sort();
    for (c, w) in into_x {
        if b.transfer(w, x).is_positive() {
            checks.push(ClaimCheck { claim: 1, source: w, target: x, holds: c == one(), cost: c.to_string() });
        }
    }
    let class = |s: Vertex| {
        if in_x.contains(&s) {
            0
        } else if s == x {
            1
        } else if s == y {
            2
        } else {
            3
        }
    };
    let targets: Vec<Vertex> = b.demand.iter().filter(|(_, m)| m.is_positive()).map(|(v, _)| *v).collect();
    for t in targets {
        let mut sources: Vec<(Rational, u8, Vertex)> = b
            .supply
            .iter()
            .filter(|(_, m)| m.is_positive())
            .filter_map(|(&s, _)| b.cost(s, t).map(|c| (c, class(s), s)))
            .collect();
        sources.sort();
        for (c, _, s) in sources {
            if !b.transfer(s, t).is_positive() {
                continue;
            }
            let from_neighbor = s != x && s != y;
            let claim = if !from_neighbor {
                None
            } else if out_x.contains(&t) && out_y.contains(&t) {
                Some((2, int(2), int(3)))
            } else if out_y.contains(&t) && t != x {
                Some((3, int(3), int(4)))
            } else {
                None
            };
            if let Some((claim, lo, hi)) = claim {
                checks.push(ClaimCheck { claim, source: s, target: t, holds: lo <= c && c <= hi, cost: c.to_string() });
            }
            if !PlanBuilder::<curvature::SourceRows>::remaining(&b.demand, t).is_positive() {
                break;
            }
        }
        if PlanBuilder::<curvature::SourceRows>::remaining(&b.demand, t).is_positive() {
            return Err(DirectedError::Infeasible(t));
        }
    }
    if let Some((&s, _)) = b.supply.iter().find(|(_, m)| m.is_positive()) {
        return Err(DirectedError::Infeasible(s));
    }
    let plan = TransportPlan::from_entries(b.moves, &d)?;
    Ok(HeuristicPlan { plan, in_three_cycle, checks })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ThreeCycleCase {
    /// The arc `x -> y` lies on the directed 3-cycle.
    Forward,
    /// The arc `y -> x` lies on the directed 3-cycle.
    Reverse,
}

/// Upper estimate of W1 on a directed 3-cycle edge:
/// Forward `3 - 2/a - 2/b - #/b - 2#/a`, Reverse `4 - 3/a - 3/b - #/b - 3#/a`
/// with `a = d_x(in)`, `b = d_y(out)`.
pub fn directed_3cycle_w1_bound(
    d_x_in: usize,
    d_y_out: usize,
    sharp: usize,
    case: ThreeCycleCase,
) -> Result<Rational, DirectedError> {
    if d_x_in == 0 || d_y_out == 0 {
        return Err(DirectedError::ZeroDegree);
    }
    let a = int(d_x_in as i64);
    let b = int(d_y_out as i64);
    let s = int(sharp as i64);
    let slack = one() - one() / &a - one() / &b - &s / a.clone().min(b.clone());
    if slack.is_negative() {
        return Err(DirectedError::FeasibilityViolated(slack));
    }
    Ok(match case {
        ThreeCycleCase::Forward => int(3) - int(2) / &a - int(2) / &b - &s / &b - int(2) * &s / &a,
        ThreeCycleCase::Reverse => int(4) - int(3) / &a - int(3) / &b - &s / &b - int(3) * &s / &a,
    })
}

/// Directed 3-cycles through the arc `x -> y`: vertices `z` with `y -> z -> x`.
pub fn three_cycle_count(g: &Graph, x: Vertex, y: Vertex) -> usize {
    g.neighbors(y).filter(|&z| z != x && g.has_edge(z, x)).count()
}

/// One bound evaluated against the exact W1 of the arc.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeCycleComparison {
    pub x: Vertex,
    pub y: Vertex,
    pub case: ThreeCycleCase,
    pub bound: Result<Rational, DirectedError>,
    pub exact: DistanceValue,
    /// `None` when the bound does not apply or the transport is blocked.
    pub bound_holds: Option<bool>,
}

/// Both 3-cycle bounds for every arc on a directed 3-cycle, next to the exact
/// `W1(m_u, m_v)` of the out-degree walk at `alpha = 0`. The Reverse case reads
/// the arc `u -> v` as `y -> x`. Violations are reported, not raised.
pub fn three_cycle_bound_report(g: &Graph) -> Result<Vec<ThreeCycleComparison>, DirectedError> {
    require_directed(g)?;
    let engine = CurvatureEngine::new(g);
    let mut out = Vec::new();
    for (u, v) in g.edges() {
        let sharp = three_cycle_count(g, u, v);
        if sharp == 0 {
            continue;
        }
        let exact = match engine.record(u, v, &Rational::zero(), false) {
            Ok(r) => r.w1,
            Err(CurvatureError::Measure(MeasureError::SinkVertex(_))) => continue,
            Err(e) => return Err(e.into()),
        };
        let degrees = [
            (ThreeCycleCase::Forward, g.degrees(u).in_deg, g.degrees(v).out_deg),
            (ThreeCycleCase::Reverse, g.degrees(v).in_deg, g.degrees(u).out_deg),
        ];
        for (case, a, b) in degrees {
            let bound = directed_3cycle_w1_bound(a, b, sharp, case);
            let bound_holds = match (&bound, &exact) {
                (Ok(bd), DistanceValue::Finite(w)) => Some(w <= bd),
                _ => None,
            };
            out.push(ThreeCycleComparison { x: u, y: v, case, bound, exact: exact.clone(), bound_holds });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branching {
    OutBranching,
    InBranching,
    Mixed,
    NotATree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BranchingClass {
    pub kind: Branching,
    pub root: Option<Vertex>,
}

/// Orientation pattern of a digraph whose underlying graph is a tree. A single
/// vertex or a single arc counts as an out-branching.
pub fn classify_tree(g: &Graph) -> BranchingClass {
    let not_a_tree = BranchingClass { kind: Branching::NotATree, root: None };
    if !g.is_directed() || g.n() == 0 || g.edge_count() != g.n() - 1 || !g.is_connected() {
        return not_a_tree;
    }
    if g.edges().iter().any(|&(u, v)| g.has_edge(v, u)) {
        return not_a_tree;
    }
    let rooted = |deg: &dyn Fn(Vertex) -> usize| -> Option<Vertex> {
        let roots: Vec<Vertex> = (0..g.n()).filter(|&v| deg(v) == 0).collect();
        let rest_single = (0..g.n()).all(|v| deg(v) <= 1);
        (roots.len() == 1 && rest_single).then(|| roots[0])
    };
    if let Some(root) = rooted(&|v| g.degrees(v).in_deg) {
        return BranchingClass { kind: Branching::OutBranching, root: Some(root) };
    }
    if let Some(root) = rooted(&|v| g.degrees(v).out_deg) {
        return BranchingClass { kind: Branching::InBranching, root: Some(root) };
    }
    BranchingClass { kind: Branching::Mixed, root: None }
}

/// Exact `W1(m_x, m_y)` of the out-degree walk, for comparisons.
pub fn directed_w1(g: &Graph, x: Vertex, y: Vertex, alpha: &Rational) -> Result<DistanceValue, DirectedError> {
    require_directed(g)?;
    let mx = yamada_measure(g, x, alpha)?;
    let my = yamada_measure(g, y, alpha)?;
    Ok(transport::wasserstein1(&mx, &my, &curvature::source_rows(g, x)).cost())
}

#[cfg(test)]
mod tests;
