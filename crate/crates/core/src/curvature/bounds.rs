//! Curvature bounds and the comparison checks built on them.

use super::{check_undirected_unweighted, CurvatureEngine, CurvatureError};
use crate::graph::{DistanceValue, Graph, Vertex};
use crate::measures::{jump, pushforward, VertexMeasure};
use crate::par::{self, Execution};
use crate::rational::{int, one, positive_part, zero, Rational};
use crate::transport;
use num_traits::{Signed, Zero};

fn edge_degrees(g: &Graph, x: Vertex, y: Vertex) -> Result<(Rational, Rational), CurvatureError> {
    if g.is_directed() {
        return Err(CurvatureError::DirectedUnsupported);
    }
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if !g.has_edge(x, y) {
        return Err(CurvatureError::NotAnEdge(x, y));
    }
    Ok((int(g.degree(x) as i64), int(g.degree(y) as i64)))
}

/// `-2 (1 - 1/d_x - 1/d_y)_+` for an edge `(x, y)`.
pub fn jost_liu_lower_bound(g: &Graph, x: Vertex, y: Vertex) -> Result<Rational, CurvatureError> {
    let (dx, dy) = edge_degrees(g, x, y)?;
    Ok(-int(2) * positive_part(&(one() - one() / dx - one() / dy)))
}

/// Triangle-refined bound
/// `-(1 - 1/d_x - 1/d_y - #/d_min)_+ - (1 - 1/d_x - 1/d_y - #/d_max)_+ + #/d_max`
/// where `#` counts triangles on the edge.
pub fn jost_liu_triangle_lower_bound(g: &Graph, x: Vertex, y: Vertex) -> Result<Rational, CurvatureError> {
    let (dx, dy) = edge_degrees(g, x, y)?;
    let t = int(g.triangle_count(x, y)? as i64);
    let (lo, hi) = if dx <= dy { (dx.clone(), dy.clone()) } else { (dy.clone(), dx.clone()) };
    let base = one() - one() / &dx - one() / &dy;
    Ok(-positive_part(&(&base - &t / &lo)) - positive_part(&(&base - &t / &hi)) + &t / &hi)
}

/// `(1 - alpha) 2 / d`, the upper bound on `kappa_alpha` at distance `d`.
///
/// # Panics
/// If `distance` is not positive.
pub fn lly_upper_bound(distance: &Rational, alpha: &Rational) -> Rational {
    assert!(distance.is_positive(), "distance must be positive");
    (one() - alpha) * int(2) / distance
}

/// Per-edge outcome of the bound suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeBoundReport {
    pub u: Vertex,
    pub v: Vertex,
    pub kappa0: Rational,
    pub jost_liu: Rational,
    pub triangle: Rational,
    /// `kappa_0` equals the Jost-Liu bound (always so on trees).
    pub tree_equality: bool,
    pub lower_bounds_hold: bool,
    pub upper_bound_holds: bool,
    pub phi_monotone: bool,
    pub concave: bool,
}

impl EdgeBoundReport {
    pub fn holds(&self) -> bool {
        self.lower_bounds_hold && self.upper_bound_holds && self.phi_monotone && self.concave
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcavityReport {
    pub values: Vec<(Rational, Rational)>,
    pub concave: bool,
    pub phi_monotone: bool,
    /// First `(alpha, beta, gamma)` failing the chord test.
    pub violation: Option<(Rational, Rational, Rational)>,
}

fn check_grid(grid: &[Rational]) -> Result<(), CurvatureError> {
    if grid.iter().any(|a| a.is_negative() || *a > one()) {
        return Err(CurvatureError::InvalidGrid("values must lie in [0, 1]".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CurvatureError::InvalidGrid("values must be strictly increasing".into()));
    }
    Ok(())
}

/// Chord test over every triple plus monotonicity of `kappa / (1 - alpha)`.
fn analyse(values: Vec<(Rational, Rational)>) -> ConcavityReport {
    let mut violation = None;
    'outer: for i in 0..values.len() {
        for j in i + 1..values.len() {
            for k in j + 1..values.len() {
                let (a, ka) = &values[i];
                let (b, kb) = &values[j];
                let (c, kc) = &values[k];
                let lambda = (c - b) / (c - a);
                let chord = &lambda * ka + (one() - &lambda) * kc;
                if *kb < chord {
                    violation = Some((a.clone(), b.clone(), c.clone()));
                    break 'outer;
                }
            }
        }
    }
    let phis: Vec<Rational> =
        values.iter().filter(|(a, _)| *a < one()).map(|(a, k)| k / (one() - a)).collect();
    let phi_monotone = phis.windows(2).all(|w| w[0] <= w[1]);
    ConcavityReport { concave: violation.is_none(), phi_monotone, violation, values }
}

/// Concavity of `alpha -> kappa_alpha(x, y)` on a sorted grid in `[0, 1]`.
pub fn concavity_check(g: &Graph, x: Vertex, y: Vertex, grid: &[Rational]) -> Result<ConcavityReport, CurvatureError> {
    check_undirected_unweighted(g)?;
    check_grid(grid)?;
    let mut values = Vec::with_capacity(grid.len());
    for a in grid {
        let r = super::orc_alpha(g, x, y, a)?;
        values.push((a.clone(), r.kappa.ok_or(CurvatureError::UnreachableMass)?));
    }
    Ok(analyse(values))
}

/// Lower bounds at `alpha = 0`, the upper bound at every grid point, and the
/// concavity/monotonicity checks, for every edge.
pub fn bound_suite(g: &Graph, grid: &[Rational], exec: Execution) -> Result<Vec<EdgeBoundReport>, CurvatureError> {
    check_undirected_unweighted(g)?;
    check_grid(grid)?;
    if grid.first().is_none_or(|a| !a.is_zero()) {
        return Err(CurvatureError::InvalidGrid("grid must start at 0".into()));
    }
    let engine = CurvatureEngine::with_execution(g, exec);
    let edges = g.edges();
    par::map(&edges, exec, |&(u, v)| {
        let mut values = Vec::with_capacity(grid.len());
        for a in grid {
            values.push((a.clone(), engine.kappa(u, v, a)?));
        }
        let kappa0 = values[0].1.clone();
        let jost_liu = jost_liu_lower_bound(g, u, v)?;
        let triangle = jost_liu_triangle_lower_bound(g, u, v)?;
        let upper_bound_holds = values.iter().all(|(a, k)| *k <= lly_upper_bound(&one(), a));
        let shape = analyse(values);
        Ok(EdgeBoundReport {
            u,
            v,
            tree_equality: kappa0 == jost_liu,
            lower_bounds_hold: jost_liu <= kappa0 && triangle <= kappa0,
            kappa0,
            jost_liu,
            triangle,
            upper_bound_holds,
            phi_monotone: shape.phi_monotone,
            concave: shape.concave,
        })
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiameterMode {
    Orc(Rational),
    Lly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiameterVerdict {
    Holds,
    Violated,
    /// The minimum edge curvature is not positive, so there is no bound.
    NonpositiveCurvature,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiameterReport {
    pub k_min: Option<Rational>,
    pub diameter: Rational,
    /// `sup_x J(x)`, ORC mode only.
    pub sup_jump: Option<Rational>,
    pub bound: Option<Rational>,
    pub verdict: DiameterVerdict,
}

/// Bonnet-Myers type diameter bound: `diam <= 2 sup J / k` for the lazy walk,
/// `diam <= 2 / k` for the LLY curvature, with `k` the minimum over edges.
pub fn diameter_bound_check(g: &Graph, mode: &DiameterMode) -> Result<DiameterReport, CurvatureError> {
    check_undirected_unweighted(g)?;
    if !g.is_connected() {
        return Err(CurvatureError::Disconnected);
    }
    let engine = CurvatureEngine::new(g);
    let diameter = engine.distances().diameter().unwrap_or_else(zero);
    let mut k_min: Option<Rational> = None;
    for (u, v) in g.edges() {
        let k = match mode {
            DiameterMode::Orc(alpha) => engine.kappa(u, v, alpha)?,
            DiameterMode::Lly => engine.lly(u, v)?.value,
        };
        if k_min.as_ref().is_none_or(|m| k < *m) {
            k_min = Some(k);
        }
    }
    let sup_jump = match mode {
        DiameterMode::Orc(alpha) if g.n() > 1 => {
            let mut best = zero();
            for x in 0..g.n() {
                best = best.max(jump(g, x, alpha)?);
            }
            Some(best)
        }
        _ => None,
    };
    let numerator = match mode {
        DiameterMode::Orc(_) => int(2) * sup_jump.clone().unwrap_or_else(zero),
        DiameterMode::Lly => int(2),
    };
    let bound = k_min.as_ref().filter(|k| k.is_positive()).map(|k| &numerator / k);
    let verdict = match &bound {
        None => DiameterVerdict::NonpositiveCurvature,
        Some(b) if diameter <= *b => DiameterVerdict::Holds,
        Some(_) => DiameterVerdict::Violated,
    };
    Ok(DiameterReport { k_min, diameter, sup_jump, bound, verdict })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropagationReport {
    pub k_edge: Option<Rational>,
    pub k_pair: Option<Rational>,
    /// Pair attaining `k_pair`.
    pub worst_pair: Option<(Vertex, Vertex)>,
    pub holds: bool,
}

/// Minimum curvature over edges versus over all pairs of distinct vertices.
pub fn geodesic_propagation_check(g: &Graph, alpha: &Rational) -> Result<PropagationReport, CurvatureError> {
    check_undirected_unweighted(g)?;
    if !g.is_connected() {
        return Err(CurvatureError::Disconnected);
    }
    propagation_with(&CurvatureEngine::new(g), alpha, Execution::default())
}

pub fn propagation_with(
    engine: &CurvatureEngine<'_>,
    alpha: &Rational,
    exec: Execution,
) -> Result<PropagationReport, CurvatureError> {
    let g = engine.graph();
    let pairs: Vec<(Vertex, Vertex)> = (0..g.n()).flat_map(|x| (0..g.n()).filter(move |&y| y != x).map(move |y| (x, y))).collect();
    let kappas: Vec<Rational> =
        par::map(&pairs, exec, |&(x, y)| engine.kappa(x, y, alpha)).into_iter().collect::<Result<_, _>>()?;
    let mut k_edge: Option<Rational> = None;
    let mut k_pair: Option<Rational> = None;
    let mut worst_pair = None;
    for (&(x, y), k) in pairs.iter().zip(kappas) {
        if g.has_edge(x, y) && k_edge.as_ref().is_none_or(|m| k < *m) {
            k_edge = Some(k.clone());
        }
        if k_pair.as_ref().is_none_or(|m| k < *m) {
            k_pair = Some(k);
            worst_pair = Some((x, y));
        }
    }
    let holds = match (&k_edge, &k_pair) {
        (Some(e), Some(p)) => p >= e,
        _ => true,
    };
    Ok(PropagationReport { k_edge, k_pair, worst_pair, holds })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionReport {
    pub k: Rational,
    /// `W1(mu * m, nu * m)`.
    pub lhs: Rational,
    /// `(1 - k) W1(mu, nu)`.
    pub rhs: Rational,
    pub holds: bool,
}

/// W1 contraction under one step of the lazy walk, with `k` the minimum
/// curvature over all pairs.
pub fn contraction_check(
    g: &Graph,
    alpha: &Rational,
    mu: &VertexMeasure,
    nu: &VertexMeasure,
) -> Result<ContractionReport, CurvatureError> {
    check_undirected_unweighted(g)?;
    if !g.is_connected() {
        return Err(CurvatureError::Disconnected);
    }
    let engine = CurvatureEngine::new(g);
    let k = propagation_with(&engine, alpha, Execution::default())?.k_pair.unwrap_or_else(one);
    contraction_with(&engine, alpha, &k, mu, nu)
}

pub fn contraction_with(
    engine: &CurvatureEngine<'_>,
    alpha: &Rational,
    k: &Rational,
    mu: &VertexMeasure,
    nu: &VertexMeasure,
) -> Result<ContractionReport, CurvatureError> {
    let g = engine.graph();
    for v in mu.support().chain(nu.support()) {
        g.check_vertex(v)?;
    }
    let w = |a: &VertexMeasure, b: &VertexMeasure| match transport::wasserstein1(a, b, engine.distances()).cost() {
        DistanceValue::Finite(c) => Ok(c),
        DistanceValue::Unreachable => Err(CurvatureError::UnreachableMass),
    };
    let lhs = w(&pushforward(g, mu, alpha)?, &pushforward(g, nu, alpha)?)?;
    let rhs = (one() - k) * w(mu, nu)?;
    Ok(ContractionReport { k: k.clone(), holds: lhs <= rhs, lhs, rhs })
}
