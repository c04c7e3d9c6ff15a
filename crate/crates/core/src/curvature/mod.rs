//! Ollivier-Ricci curvature of the lazy walk and its Lin-Lu-Yau limit.

mod bounds;

pub use bounds::{
    bound_suite, concavity_check, contraction_check, contraction_with, diameter_bound_check,
    geodesic_propagation_check, jost_liu_lower_bound, jost_liu_triangle_lower_bound, lly_upper_bound, propagation_with, ConcavityReport, ContractionReport,
    DiameterMode, DiameterReport, DiameterVerdict, EdgeBoundReport, PropagationReport,
};

use crate::graph::{all_pairs_distances_with, shortest_paths_from, DistanceTable, DistanceValue, Graph, GraphError, Vertex};
use crate::measures::{LazyWalk, MeasureError, StepMeasure};
use crate::par::{self, Execution};
use crate::rational::{one, Rational};
use crate::transport::{self, GroundDistance, TransportPlan};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

/// Largest `k` tried when looking for the limit `alpha = 1 - 2^-k`.
pub const LLY_K_MAX: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurvatureError {
    #[error("curvature needs two distinct vertices, got {0} twice")]
    SameVertex(Vertex),
    #[error("{1} is unreachable from {0}")]
    UnreachablePair(Vertex, Vertex),
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(Vertex, Vertex),
    #[error("({0}, {1}) is not an arc")]
    NotAnArc(Vertex, Vertex),
    #[error("directed graphs use the directed curvature routines")]
    DirectedUnsupported,
    #[error("curvature is defined on unweighted graphs only")]
    WeightedUnsupported,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("phi(alpha) did not repeat for alpha = 1 - 2^-k, k <= {k_max}, on ({x}, {y})")]
    LimitNotStabilized { x: Vertex, y: Vertex, k_max: u32 },
    #[error("invalid alpha grid: {0}")]
    InvalidGrid(String),
    #[error("measure pair has no finite-cost coupling")]
    UnreachableMass,
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One curvature evaluation `kappa = 1 - W1(m_x, m_y) / d(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureRecord {
    pub x: Vertex,
    pub y: Vertex,
    pub alpha: Rational,
    pub distance: DistanceValue,
    pub w1: DistanceValue,
    /// `None` when the transport is blocked.
    pub kappa: Option<Rational>,
    pub directed: bool,
    pub plan: Option<TransportPlan>,
}

impl CurvatureRecord {
    /// Re-derives `kappa` from `w1` and `distance`.
    pub fn is_consistent(&self) -> bool {
        match (&self.distance, &self.w1) {
            (DistanceValue::Finite(d), DistanceValue::Finite(w)) if !d.is_zero() => {
                self.kappa.as_ref() == Some(&(one() - w / d))
            }
            _ => self.kappa.is_none(),
        }
    }
}

/// The LLY limit and the step at which `phi` first repeated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LlyLimit {
    pub value: Rational,
    pub steps: u32,
}

/// Curvature evaluations on one graph, sharing a distance table.
///
/// Weights, if any, enter through the ground distance only; the step measures
/// stay degree-uniform.
pub struct CurvatureEngine<'g> {
    g: &'g Graph,
    dist: DistanceTable,
}

impl<'g> CurvatureEngine<'g> {
    pub fn new(g: &'g Graph) -> Self {
        Self::with_execution(g, Execution::default())
    }

    pub fn with_execution(g: &'g Graph, exec: Execution) -> Self {
        Self { g, dist: all_pairs_distances_with(g, exec) }
    }

    pub fn graph(&self) -> &Graph {
        self.g
    }

    pub fn distances(&self) -> &DistanceTable {
        &self.dist
    }

    /// Curvature of the pair `(x, y)`; any pair of distinct vertices, not only edges.
    pub fn record(&self, x: Vertex, y: Vertex, alpha: &Rational, keep_plan: bool) -> Result<CurvatureRecord, CurvatureError> {
        record_with(self.g, x, y, alpha, &self.dist, keep_plan)
    }

    pub fn kappa(&self, x: Vertex, y: Vertex, alpha: &Rational) -> Result<Rational, CurvatureError> {
        let r = self.record(x, y, alpha, false)?;
        r.kappa.ok_or(CurvatureError::UnreachableMass)
    }

    /// `phi(alpha) = kappa_alpha / (1 - alpha)` for `alpha < 1`.
    pub fn phi(&self, x: Vertex, y: Vertex, alpha: &Rational) -> Result<Rational, CurvatureError> {
        Ok(self.kappa(x, y, alpha)? / (one() - alpha))
    }

    pub fn lly(&self, x: Vertex, y: Vertex) -> Result<LlyLimit, CurvatureError> {
        lly_with(self.g, x, y, &self.dist)
    }
}

/// `1 - 2^-k`.
pub fn lly_alpha(k: u32) -> Rational {
    one() - Rational::new(One::one(), num_bigint::BigInt::from(2u8).pow(k))
}

pub(crate) fn record_with<D: GroundDistance + ?Sized>(
    g: &Graph,
    x: Vertex,
    y: Vertex,
    alpha: &Rational,
    d: &D,
    keep_plan: bool,
) -> Result<CurvatureRecord, CurvatureError> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Err(CurvatureError::SameVertex(x));
    }
    let distance = d.distance(x, y);
    if !distance.is_finite() {
        return Err(CurvatureError::UnreachablePair(x, y));
    }
    let walk = LazyWalk::new(alpha.clone());
    let mx = walk.step(g, x)?;
    let my = walk.step(g, y)?;
    let t = transport::wasserstein1(&mx, &my, d);
    let w1 = t.cost();
    let kappa = match (&distance, &w1) {
        (DistanceValue::Finite(dxy), DistanceValue::Finite(w)) => Some(one() - w / dxy),
        _ => None,
    };
    let plan = if keep_plan { t.plan().cloned() } else { None };
    Ok(CurvatureRecord { x, y, alpha: alpha.clone(), distance, w1, kappa, directed: g.is_directed(), plan })
}

fn check_undirected_unweighted(g: &Graph) -> Result<(), CurvatureError> {
    if g.is_directed() {
        return Err(CurvatureError::DirectedUnsupported);
    }
    if g.is_weighted() {
        return Err(CurvatureError::WeightedUnsupported);
    }
    Ok(())
}

/// Distances from the support of `m_x` only, enough for a single W1 solve.
pub(crate) struct SourceRows(BTreeMap<Vertex, Vec<DistanceValue>>);

impl GroundDistance for SourceRows {
    fn distance(&self, from: Vertex, to: Vertex) -> DistanceValue {
        self.0.get(&from).map_or(DistanceValue::Unreachable, |row| row[to].clone())
    }
}

pub(crate) fn source_rows(g: &Graph, x: Vertex) -> SourceRows {
    let mut rows = BTreeMap::new();
    for v in std::iter::once(x).chain(g.neighbors(x)) {
        rows.insert(v, shortest_paths_from(g, v));
    }
    SourceRows(rows)
}

/// Ollivier-Ricci curvature of the lazy walk with laziness `alpha`.
pub fn orc_alpha(g: &Graph, x: Vertex, y: Vertex, alpha: &Rational) -> Result<CurvatureRecord, CurvatureError> {
    check_undirected_unweighted(g)?;
    g.check_vertex(x)?;
    record_with(g, x, y, alpha, &source_rows(g, x), false)
}

/// Lin-Lu-Yau curvature `lim_{alpha -> 1} kappa_alpha / (1 - alpha)`.
pub fn lly_curvature(g: &Graph, x: Vertex, y: Vertex) -> Result<Rational, CurvatureError> {
    lly_limit(g, x, y).map(|l| l.value)
}

pub fn lly_limit(g: &Graph, x: Vertex, y: Vertex) -> Result<LlyLimit, CurvatureError> {
    check_undirected_unweighted(g)?;
    g.check_vertex(x)?;
    lly_with(g, x, y, &source_rows(g, x))
}

/// `phi` is nondecreasing and piecewise linear in `alpha`, so two equal
/// consecutive values certify the limit.
fn lly_with<D: GroundDistance + ?Sized>(g: &Graph, x: Vertex, y: Vertex, d: &D) -> Result<LlyLimit, CurvatureError> {
    let mut prev: Option<Rational> = None;
    for k in 1..=LLY_K_MAX {
        let alpha = lly_alpha(k);
        let r = record_with(g, x, y, &alpha, d, false)?;
        let phi = r.kappa.ok_or(CurvatureError::UnreachableMass)? / (one() - &alpha);
        if prev.as_ref() == Some(&phi) {
            return Ok(LlyLimit { value: phi, steps: k });
        }
        prev = Some(phi);
    }
    Err(CurvatureError::LimitNotStabilized { x, y, k_max: LLY_K_MAX })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SweepMode {
    Orc(Rational),
    Lly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeValue {
    Orc(CurvatureRecord),
    Lly(LlyLimit),
}

impl EdgeValue {
    pub fn kappa(&self) -> Option<&Rational> {
        match self {
            EdgeValue::Orc(r) => r.kappa.as_ref(),
            EdgeValue::Lly(l) => Some(&l.value),
        }
    }
}

/// Outcome for one edge of a sweep. Errors stay local to their edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCurvature {
    pub u: Vertex,
    pub v: Vertex,
    pub outcome: Result<EdgeValue, CurvatureError>,
}

/// Curvature of every edge, in the order of `Graph::edges`.
pub fn curvature_sweep(g: &Graph, mode: &SweepMode, exec: Execution) -> Result<Vec<EdgeCurvature>, CurvatureError> {
    check_undirected_unweighted(g)?;
    Ok(sweep_with(&CurvatureEngine::with_execution(g, exec), mode, false, exec))
}

/// Sweep over the engine's graph; weighted and directed graphs allowed.
pub fn sweep_with(engine: &CurvatureEngine<'_>, mode: &SweepMode, keep_plan: bool, exec: Execution) -> Vec<EdgeCurvature> {
    let edges = engine.graph().edges();
    par::map(&edges, exec, |&(u, v)| {
        let outcome = match mode {
            SweepMode::Orc(alpha) => engine.record(u, v, alpha, keep_plan).map(EdgeValue::Orc),
            SweepMode::Lly => engine.lly(u, v).map(EdgeValue::Lly),
        };
        EdgeCurvature { u, v, outcome }
    })
}

/// Curvature of every edge as a map, failing on the first edge error.
pub fn edge_curvatures(engine: &CurvatureEngine<'_>, alpha: &Rational, exec: Execution) -> Result<BTreeMap<(Vertex, Vertex), Rational>, CurvatureError> {
    sweep_with(engine, &SweepMode::Orc(alpha.clone()), false, exec)
        .into_iter()
        .map(|e| {
            let value = e.outcome?;
            let k = value.kappa().cloned().ok_or(CurvatureError::UnreachableMass)?;
            Ok(((e.u, e.v), k))
        })
        .collect()
}
