use super::{require_undirected, CommunityAssignment, NetError};
use crate::curvature::{edge_curvatures, CurvatureEngine};
use crate::graph::{Graph, Vertex};
use crate::par::Execution;
use crate::rational::{one, rat, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Evolved weights are rounded to multiples of `2^-WEIGHT_GRID_BITS` after
/// each renormalization, which keeps the rationals bounded across iterations.
pub const WEIGHT_GRID_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct FlowParams {
    /// Step size, in `(0, 1)`.
    pub nu: Rational,
    /// Smallest modularity accepted as a clustering.
    pub eps: f64,
    /// Relative modularity gain needed to replace the stored labels.
    pub eps_d: f64,
    pub iterations: usize,
    pub alpha: Rational,
}

impl Default for FlowParams {
    fn default() -> Self {
        Self { nu: rat(1, 2), eps: 1e-4, eps_d: 1e-4, iterations: 20, alpha: Rational::zero() }
    }
}

impl FlowParams {
    pub fn validate(&self) -> Result<(), NetError> {
        if !(self.nu.is_positive() && self.nu < one()) {
            return Err(NetError::InvalidParameter(format!("nu must lie in (0, 1), got {}", self.nu)));
        }
        if self.iterations == 0 {
            return Err(NetError::InvalidParameter("T must be at least 1".into()));
        }
        if !(self.eps >= 0.0 && self.eps_d >= 0.0) {
            return Err(NetError::InvalidParameter("eps and eps_d must be nonnegative".into()));
        }
        if self.alpha.is_negative() || self.alpha >= one() {
            return Err(NetError::InvalidParameter(format!("alpha must lie in [0, 1), got {}", self.alpha)));
        }
        Ok(())
    }
}

/// Edge weights after each flow iteration, keyed by `(u, v)` with `u < v`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrajectory {
    pub steps: Vec<BTreeMap<(Vertex, Vertex), Rational>>,
}

impl FlowTrajectory {
    pub fn last(&self) -> &BTreeMap<(Vertex, Vertex), Rational> {
        self.steps.last().expect("at least one iteration")
    }
}

/// Rounds positive weights to the `2^-bits` grid so that they still sum to
/// `total`: floors first, then the largest remainders (ties by position) get
/// one extra unit. `None` if a weight would round to zero.
pub fn quantize_weights(weights: &[Rational], total: &Rational, bits: u32) -> Option<Vec<Rational>> {
    let scale = BigInt::one() << bits;
    let scale_r = Rational::from_integer(scale.clone());
    let target = total * &scale_r;
    if !target.is_integer() {
        return None;
    }
    let mut units: Vec<BigInt> = Vec::with_capacity(weights.len());
    let mut rems: Vec<(Rational, usize)> = Vec::with_capacity(weights.len());
    for (i, w) in weights.iter().enumerate() {
        let scaled = w * &scale_r;
        let fl = scaled.floor();
        rems.push((scaled - &fl, i));
        units.push(fl.to_integer());
    }
    let assigned: BigInt = units.iter().sum();
    let missing = (target.to_integer() - assigned).to_usize()?;
    rems.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, i) in rems.iter().take(missing) {
        units[i] += 1;
    }
    if units.iter().any(|u| !u.is_positive()) {
        return None;
    }
    Some(units.into_iter().map(|u| Rational::new(u, scale.clone())).collect())
}

/// Discrete Ricci flow `w <- (1 - nu * kappa) d(u, v)` followed by rescaling
/// to total weight `|E|`. Curvature uses the current weighted distances as
/// ground cost; the step measures stay degree-uniform.
pub fn ricci_flow_weights(g: &Graph, p: &FlowParams, exec: Execution) -> Result<FlowTrajectory, NetError> {
    p.validate()?;
    require_undirected(g)?;
    if g.edge_count() == 0 {
        return Err(NetError::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(NetError::Disconnected);
    }
    let edges = g.edges();
    let total = Rational::from_integer(edges.len().into());
    let mut current = g.clone();
    let mut steps = Vec::with_capacity(p.iterations);
    for iteration in 1..=p.iterations {
        let engine = CurvatureEngine::with_execution(&current, exec);
        let kappa = edge_curvatures(&engine, &p.alpha, exec)?;
        let mut evolved = Vec::with_capacity(edges.len());
        for &(u, v) in &edges {
            let d = engine.distances().get(u, v).finite().cloned().ok_or(NetError::Disconnected)?;
            let w = (one() - &p.nu * &kappa[&(u, v)]) * d;
            if !w.is_positive() {
                return Err(NetError::NonpositiveWeight { iteration, u, v });
            }
            evolved.push(w);
        }
        let sum: Rational = evolved.iter().sum();
        let scaled: Vec<Rational> = evolved.iter().map(|w| w * &total / &sum).collect();
        let (u, v) = edges[0];
        let weights = quantize_weights(&scaled, &total, WEIGHT_GRID_BITS)
            .ok_or(NetError::NonpositiveWeight { iteration, u, v })?;
        let step: BTreeMap<_, _> = edges.iter().copied().zip(weights).collect();
        current = current.with_edges(step.iter().map(|(&(u, v), w)| (u, v, w.clone())))?;
        steps.push(step);
    }
    Ok(FlowTrajectory { steps })
}

/// Tries every distinct final weight as a cut-off, keeps edges of weight at
/// most the cut-off, and scores the components by modularity on `g`. A
/// cut-off replaces the stored labels when `Q > 0` and
/// `(Q - Q_best) / Q > eps_d`; without any labeling scoring above `eps` the
/// components of `g` itself are returned.
pub fn threshold_sweep_cluster(
    g: &Graph,
    weights: &BTreeMap<(Vertex, Vertex), Rational>,
    p: &FlowParams,
) -> Result<CommunityAssignment, NetError> {
    require_undirected(g)?;
    let mut cutoffs: Vec<&Rational> = weights.values().collect();
    cutoffs.sort();
    cutoffs.dedup();
    let mut best: Option<CommunityAssignment> = None;
    let mut q_best = p.eps;
    for cut in cutoffs {
        let kept = weights
            .iter()
            .filter(|(_, w)| *w <= cut)
            .map(|(&(u, v), _)| (u, v, one()));
        let labels = g.with_edges(kept)?.components();
        let candidate = CommunityAssignment::new(g, &labels);
        let q = candidate.modularity;
        if q > 0.0 && (q - q_best) / q > p.eps_d {
            q_best = q;
            best = Some(candidate);
        }
    }
    Ok(best
        .filter(|b| b.modularity > p.eps)
        .unwrap_or_else(|| CommunityAssignment::new(g, &g.components())))
}
