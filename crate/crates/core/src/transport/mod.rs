//! Exact 1-Wasserstein distance between finitely supported vertex measures.
//!
//! The ground distance may be asymmetric and may contain unreachable pairs
//! (shortest dipaths on a digraph). The primal is solved as a transportation
//! problem on the support bipartite graph; the dual certificate is a single
//! potential `f` with `f(u) - f(v) <= d(u, v)` and
//! `sum f (mu - nu) = W1(mu, nu)`.

mod flow;
mod hungarian;
mod sinkhorn;

pub use hungarian::{min_cost_assignment, unit_split_oracle};
pub use sinkhorn::{sinkhorn_approx, SinkhornParams, SinkhornResult};

use crate::graph::{DistanceTable, DistanceValue, Vertex};
use crate::measures::VertexMeasure;
use crate::rational::{one, serde_rational, Rational};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransportError {
    #[error("invalid measure: {0}")]
    MeasureInvalid(String),
    #[error("no finite-cost coupling exists")]
    InfeasibleTransport,
    #[error("plan and certificate describe different problems")]
    MismatchedProblem,
    #[error("mass {mass} at vertex {vertex} is not a multiple of 1/{denom}")]
    DenominatorMismatch { vertex: Vertex, mass: Rational, denom: u32 },
    #[error("plan moves mass over the unreachable pair ({0}, {1})")]
    UnreachablePair(Vertex, Vertex),
    #[error("Sinkhorn did not converge after {iterations} iterations (marginal residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// A cost function on ordered vertex pairs.
pub trait GroundDistance: Sync {
    fn distance(&self, from: Vertex, to: Vertex) -> DistanceValue;
}

impl GroundDistance for DistanceTable {
    fn distance(&self, from: Vertex, to: Vertex) -> DistanceValue {
        self.get(from, to).clone()
    }
}

impl<F> GroundDistance for F
where
    F: Fn(Vertex, Vertex) -> DistanceValue + Sync,
{
    fn distance(&self, from: Vertex, to: Vertex) -> DistanceValue {
        self(from, to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanEntry {
    pub source: Vertex,
    pub target: Vertex,
    #[serde(with = "serde_rational")]
    pub mass: Rational,
}

/// A coupling between two measures, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransportPlan {
    entries: Vec<PlanEntry>,
    #[serde(with = "serde_rational")]
    cost: Rational,
}

impl TransportPlan {
    /// Builds a plan from `(source, target, mass)` triples, merging repeats
    /// and costing each entry with `d`.
    pub fn from_entries<I, D>(entries: I, d: &D) -> Result<Self, TransportError>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Rational)>,
        D: GroundDistance + ?Sized,
    {
        let mut merged: BTreeMap<(Vertex, Vertex), Rational> = BTreeMap::new();
        for (s, t, m) in entries {
            if m < Rational::zero() {
                return Err(TransportError::MeasureInvalid(format!("negative mass {m} on ({s}, {t})")));
            }
            *merged.entry((s, t)).or_insert_with(Rational::zero) += m;
        }
        let mut cost = Rational::zero();
        let mut out = Vec::with_capacity(merged.len());
        for ((source, target), mass) in merged {
            if mass.is_zero() {
                continue;
            }
            match d.distance(source, target) {
                DistanceValue::Finite(c) => cost += &mass * c,
                DistanceValue::Unreachable => return Err(TransportError::UnreachablePair(source, target)),
            }
            out.push(PlanEntry { source, target, mass });
        }
        Ok(Self { entries: out, cost })
    }

    pub fn entries(&self) -> &[PlanEntry] {
        &self.entries
    }

    pub fn cost(&self) -> &Rational {
        &self.cost
    }

    /// Row sums: mass leaving each source.
    pub fn source_marginal(&self) -> BTreeMap<Vertex, Rational> {
        let mut m = BTreeMap::new();
        for e in &self.entries {
            *m.entry(e.source).or_insert_with(Rational::zero) += &e.mass;
        }
        m
    }

    /// Column sums: mass arriving at each target.
    pub fn target_marginal(&self) -> BTreeMap<Vertex, Rational> {
        let mut m = BTreeMap::new();
        for e in &self.entries {
            *m.entry(e.target).or_insert_with(Rational::zero) += &e.mass;
        }
        m
    }

    /// Whether the plan is a coupling of `mu` and `nu` (exact equality).
    pub fn couples(&self, mu: &VertexMeasure, nu: &VertexMeasure) -> bool {
        let as_map = |m: &VertexMeasure| m.iter().map(|(v, p)| (v, p.clone())).collect::<BTreeMap<_, _>>();
        self.source_marginal() == as_map(mu) && self.target_marginal() == as_map(nu)
    }
}

/// Result of an exact W1 solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transport {
    Optimal(TransportPlan),
    /// Every coupling must move mass across an unreachable pair.
    Unreachable,
}

impl Transport {
    pub fn cost(&self) -> DistanceValue {
        match self {
            Transport::Optimal(p) => DistanceValue::Finite(p.cost.clone()),
            Transport::Unreachable => DistanceValue::Unreachable,
        }
    }

    pub fn plan(&self) -> Option<&TransportPlan> {
        match self {
            Transport::Optimal(p) => Some(p),
            Transport::Unreachable => None,
        }
    }
}

/// Kantorovich potential certifying a W1 value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualCertificate {
    #[serde(serialize_with = "serialize_potentials")]
    pub potentials: BTreeMap<Vertex, Rational>,
    #[serde(with = "serde_rational")]
    pub value: Rational,
}

fn serialize_potentials<S: serde::Serializer>(p: &BTreeMap<Vertex, Rational>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(p.len()))?;
    for (v, f) in p {
        map.serialize_entry(&v.to_string(), &crate::rational::format_rational(f))?;
    }
    map.end()
}

impl DualCertificate {
    /// First ordered pair violating `f(u) - f(v) <= d(u, v)`, if any.
    pub fn lipschitz_violation<D: GroundDistance + ?Sized>(&self, d: &D) -> Option<(Vertex, Vertex)> {
        for (u, fu) in &self.potentials {
            for (v, fv) in &self.potentials {
                if u == v {
                    continue;
                }
                if let DistanceValue::Finite(duv) = d.distance(*u, *v) {
                    if fu - fv > duv {
                        return Some((*u, *v));
                    }
                }
            }
        }
        None
    }

    /// `sum_v f(v) (mu(v) - nu(v))` over the potential's domain.
    pub fn evaluate(&self, mu: &BTreeMap<Vertex, Rational>, nu: &BTreeMap<Vertex, Rational>) -> Option<Rational> {
        let mut total = Rational::zero();
        for (v, m) in mu {
            total += self.potentials.get(v)? * m;
        }
        for (v, m) in nu {
            total -= self.potentials.get(v)? * m;
        }
        Some(total)
    }
}

/// Optimal plan together with its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportSolution {
    pub plan: TransportPlan,
    pub certificate: DualCertificate,
}

struct Problem {
    sources: Vec<(Vertex, Rational)>,
    targets: Vec<(Vertex, Rational)>,
    costs: Vec<Vec<Option<Rational>>>,
}

impl Problem {
    fn new<D: GroundDistance + ?Sized>(mu: &VertexMeasure, nu: &VertexMeasure, d: &D) -> Self {
        let sources: Vec<_> = mu.iter().map(|(v, m)| (v, m.clone())).collect();
        let targets: Vec<_> = nu.iter().map(|(v, m)| (v, m.clone())).collect();
        let costs = sources
            .iter()
            .map(|(s, _)| targets.iter().map(|(t, _)| d.distance(*s, *t).finite().cloned()).collect())
            .collect();
        Self { sources, targets, costs }
    }

    fn solve_flow(&self) -> Option<Vec<(usize, usize, Rational)>> {
        let supply: Vec<Rational> = self.sources.iter().map(|(_, m)| m.clone()).collect();
        let demand: Vec<Rational> = self.targets.iter().map(|(_, m)| m.clone()).collect();
        let result = flow::TransportNetwork::new(&supply, &demand, &self.costs).solve(&one());
        (result.total == one()).then_some(result.flows)
    }
}

fn plan_from_flows<D: GroundDistance + ?Sized>(
    p: &Problem,
    flows: &[(usize, usize, Rational)],
    d: &D,
) -> TransportPlan {
    TransportPlan::from_entries(
        flows.iter().map(|(i, j, m)| (p.sources[*i].0, p.targets[*j].0, m.clone())),
        d,
    )
    .expect("optimal flow uses finite pairs only")
}

/// Exact W1 with an optimal plan, or `Unreachable` when no finite-cost
/// coupling exists.
pub fn wasserstein1<D: GroundDistance + ?Sized>(mu: &VertexMeasure, nu: &VertexMeasure, d: &D) -> Transport {
    let problem = Problem::new(mu, nu, d);
    match problem.solve_flow() {
        Some(flows) => Transport::Optimal(plan_from_flows(&problem, &flows, d)),
        None => Transport::Unreachable,
    }
}

/// Exact W1 plus a dual certificate with the same value.
pub fn solve<D: GroundDistance + ?Sized>(
    mu: &VertexMeasure,
    nu: &VertexMeasure,
    d: &D,
) -> Result<TransportSolution, TransportError> {
    let problem = Problem::new(mu, nu, d);
    let flows = problem.solve_flow().ok_or(TransportError::InfeasibleTransport)?;
    let plan = plan_from_flows(&problem, &flows, d);
    let (a, b) = (problem.sources.len(), problem.targets.len());
    let pot = flow::residual_potentials(a, b, &problem.costs, &flows);
    // Target-side potential g(t) = -pot(t); extend to every support vertex by
    // f(z) = min_t d(z, t) + g(t), which is 1-Lipschitz for any (quasi)metric d.
    let target_values: Vec<(Vertex, Rational)> =
        problem.targets.iter().enumerate().map(|(j, (t, _))| (*t, -pot[a + j].clone())).collect();
    let mut domain: Vec<Vertex> = problem.sources.iter().chain(&problem.targets).map(|(v, _)| *v).collect();
    domain.sort_unstable();
    domain.dedup();
    let mut potentials = BTreeMap::new();
    for z in domain {
        let best = target_values
            .iter()
            .filter_map(|(t, g)| d.distance(z, *t).finite().map(|dz| dz + g))
            .min()
            .expect("every support vertex reaches some target");
        potentials.insert(z, best);
    }
    let floor = potentials.values().min().cloned().unwrap_or_else(Rational::zero);
    for f in potentials.values_mut() {
        *f -= &floor;
    }
    let mu_map: BTreeMap<_, _> = mu.iter().map(|(v, m)| (v, m.clone())).collect();
    let nu_map: BTreeMap<_, _> = nu.iter().map(|(v, m)| (v, m.clone())).collect();
    let mut certificate = DualCertificate { potentials, value: Rational::zero() };
    certificate.value = certificate.evaluate(&mu_map, &nu_map).expect("potential covers both supports");
    debug_assert_eq!(&certificate.value, plan.cost(), "strong duality");
    Ok(TransportSolution { plan, certificate })
}

pub fn wasserstein1_dual<D: GroundDistance + ?Sized>(
    mu: &VertexMeasure,
    nu: &VertexMeasure,
    d: &D,
) -> Result<DualCertificate, TransportError> {
    solve(mu, nu, d).map(|s| s.certificate)
}

/// `plan.cost - cert.value`, after checking that the certificate evaluated on
/// the plan's marginals reproduces its stated value.
pub fn duality_gap(plan: &TransportPlan, cert: &DualCertificate) -> Result<Rational, TransportError> {
    let value = cert
        .evaluate(&plan.source_marginal(), &plan.target_marginal())
        .ok_or(TransportError::MismatchedProblem)?;
    if value != cert.value {
        return Err(TransportError::MismatchedProblem);
    }
    Ok(plan.cost() - &cert.value)
}

#[cfg(test)]
mod tests;
