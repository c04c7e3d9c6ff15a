//! Finitely supported probability measures on vertices and the random-walk
//! step measures used by the curvature definitions.

use crate::graph::{shortest_paths_from, DistanceValue, Graph, GraphError, Vertex};
use crate::transport;
use crate::rational::{int, one, serde_rational, Rational};
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("vertex {0} is isolated: the lazy walk has no step measure for alpha < 1")]
    IsolatedVertex(Vertex),
    #[error("vertex {0} is a sink: no out-neighbors for alpha < 1")]
    SinkVertex(Vertex),
    #[error("graph is directed; use the out-degree (Yamada) measure")]
    DirectedGraphUseYamada,
    #[error("the out-degree measure is defined on directed graphs only")]
    UndirectedGraph,
    #[error("alpha must lie in [0, 1], got {0}")]
    AlphaOutOfRange(Rational),
    #[error("masses must be positive and sum to 1 (sum = {0})")]
    NotAProbability(Rational),
    #[error("mixing weight must lie in [0, 1], got {0}")]
    InvalidMixingWeight(Rational),
    #[error("mass at {0} cannot reach the step measure")]
    UnreachableMass(Vertex),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A probability measure with finite support and exact rational masses.
///
/// Invariant: every stored mass is positive and the masses sum to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexMeasure {
    masses: BTreeMap<Vertex, Rational>,
}

impl VertexMeasure {
    /// Validates and builds a measure. Zero entries are dropped, repeated
    /// vertices accumulate.
    pub fn new<I>(entries: I) -> Result<Self, MeasureError>
    where
        I: IntoIterator<Item = (Vertex, Rational)>,
    {
        let mut masses: BTreeMap<Vertex, Rational> = BTreeMap::new();
        let mut total = Rational::zero();
        let mut negative = false;
        for (v, m) in entries {
            negative |= m.is_negative();
            total += &m;
            *masses.entry(v).or_insert_with(Rational::zero) += m;
        }
        masses.retain(|_, m| !m.is_zero());
        if negative || !total.is_one() || masses.values().any(|m| m.is_negative()) {
            return Err(MeasureError::NotAProbability(total));
        }
        Ok(Self { masses })
    }

    pub fn dirac(x: Vertex) -> Self {
        Self { masses: BTreeMap::from([(x, one())]) }
    }

    pub fn mass(&self, v: Vertex) -> Rational {
        self.masses.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.masses.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, &Rational)> + '_ {
        self.masses.iter().map(|(v, m)| (*v, m))
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn total(&self) -> Rational {
        self.masses.values().sum()
    }

    /// `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, lambda: &Rational, other: &VertexMeasure) -> Result<VertexMeasure, MeasureError> {
        if lambda.is_negative() || lambda > &one() {
            return Err(MeasureError::InvalidMixingWeight(lambda.clone()));
        }
        let rest = one() - lambda;
        let entries = self
            .iter()
            .map(|(v, m)| (v, m * lambda))
            .chain(other.iter().map(|(v, m)| (v, m * &rest)));
        VertexMeasure::new(entries)
    }
}

impl Serialize for VertexMeasure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Mass<'a>(&'a Rational);
        impl Serialize for Mass<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                serde_rational::serialize(self.0, s)
            }
        }
        let mut map = s.serialize_map(Some(self.masses.len()))?;
        for (v, m) in &self.masses {
            map.serialize_entry(&v.to_string(), &Mass(m))?;
        }
        map.end()
    }
}

fn check_alpha(alpha: &Rational) -> Result<(), MeasureError> {
    if alpha.is_negative() || alpha > &one() {
        Err(MeasureError::AlphaOutOfRange(alpha.clone()))
    } else {
        Ok(())
    }
}

/// Uniform spread of `1 - alpha` over `targets`, keeping `alpha` at `x`.
fn lazy_spread(x: Vertex, alpha: &Rational, targets: &[Vertex]) -> VertexMeasure {
    let mut masses = BTreeMap::new();
    if !alpha.is_zero() {
        masses.insert(x, alpha.clone());
    }
    let rest = one() - alpha;
    if !rest.is_zero() {
        let share = rest / int(targets.len() as i64);
        for &t in targets {
            masses.insert(t, share.clone());
        }
    }
    VertexMeasure { masses }
}

/// The lazy random-walk measure: `alpha` at `x`, `(1 - alpha)/d_x` on each neighbor.
pub fn lly_measure(g: &Graph, x: Vertex, alpha: &Rational) -> Result<VertexMeasure, MeasureError> {
    g.check_vertex(x)?;
    check_alpha(alpha)?;
    if g.is_directed() {
        return Err(MeasureError::DirectedGraphUseYamada);
    }
    let nbrs: Vec<Vertex> = g.neighbors(x).collect();
    if nbrs.is_empty() && !alpha.is_one() {
        return Err(MeasureError::IsolatedVertex(x));
    }
    Ok(lazy_spread(x, alpha, &nbrs))
}

/// The out-degree walk on a digraph: `alpha` at `x`, `(1 - alpha)/d_out(x)`
/// on each out-neighbor.
pub fn yamada_measure(g: &Graph, x: Vertex, alpha: &Rational) -> Result<VertexMeasure, MeasureError> {
    g.check_vertex(x)?;
    check_alpha(alpha)?;
    if !g.is_directed() {
        return Err(MeasureError::UndirectedGraph);
    }
    let outs: Vec<Vertex> = g.neighbors(x).collect();
    if outs.is_empty() && !alpha.is_one() {
        return Err(MeasureError::SinkVertex(x));
    }
    Ok(lazy_spread(x, alpha, &outs))
}

pub fn dirac(x: Vertex) -> VertexMeasure {
    VertexMeasure::dirac(x)
}

/// A family of step measures `x -> m_x`, i.e. a random walk on the vertices.
pub trait StepMeasure: Sync {
    fn step(&self, g: &Graph, x: Vertex) -> Result<VertexMeasure, MeasureError>;
}

/// Lazy walk on undirected graphs, out-degree walk on digraphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LazyWalk {
    pub alpha: Rational,
}

impl LazyWalk {
    pub fn new(alpha: Rational) -> Self {
        Self { alpha }
    }
}

impl StepMeasure for LazyWalk {
    fn step(&self, g: &Graph, x: Vertex) -> Result<VertexMeasure, MeasureError> {
        if g.is_directed() {
            yamada_measure(g, x, &self.alpha)
        } else {
            lly_measure(g, x, &self.alpha)
        }
    }
}

/// Image of `mu` under one step of the walk: `sum_x mu(x) m_x`.
pub fn pushforward_with<W: StepMeasure + ?Sized>(
    g: &Graph,
    mu: &VertexMeasure,
    walk: &W,
) -> Result<VertexMeasure, MeasureError> {
    let mut acc: BTreeMap<Vertex, Rational> = BTreeMap::new();
    for (x, px) in mu.iter() {
        let step = walk.step(g, x)?;
        for (v, pv) in step.iter() {
            *acc.entry(v).or_insert_with(Rational::zero) += px * pv;
        }
    }
    VertexMeasure::new(acc)
}

pub fn pushforward(g: &Graph, mu: &VertexMeasure, alpha: &Rational) -> Result<VertexMeasure, MeasureError> {
    pushforward_with(g, mu, &LazyWalk::new(alpha.clone()))
}

/// Jump of the walk at `x`: `W1(delta_x, m_x)` under the shortest-path metric.
pub fn jump(g: &Graph, x: Vertex, alpha: &Rational) -> Result<Rational, MeasureError> {
    let m = LazyWalk::new(alpha.clone()).step(g, x)?;
    let row = shortest_paths_from(g, x);
    let d = |s: Vertex, t: Vertex| if s == x { row[t].clone() } else { DistanceValue::Unreachable };
    match transport::wasserstein1(&VertexMeasure::dirac(x), &m, &d).cost() {
        DistanceValue::Finite(c) => Ok(c),
        DistanceValue::Unreachable => Err(MeasureError::UnreachableMass(x)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::{complete, hypercube, path};
    use crate::rational::{rat, zero};
    use proptest::prelude::*;

    fn measure(entries: &[(Vertex, Rational)]) -> VertexMeasure {
        VertexMeasure::new(entries.iter().cloned()).unwrap()
    }

    #[test]
    fn single_edge_alpha_zero_is_dirac_at_the_other_end() {
        let g = path(2);
        assert_eq!(lly_measure(&g, 0, &zero()).unwrap(), dirac(1));
    }

    #[test]
    fn triangle_half_lazy() {
        let m = lly_measure(&complete(3), 0, &rat(1, 2)).unwrap();
        assert_eq!(m, measure(&[(0, rat(1, 2)), (1, rat(1, 4)), (2, rat(1, 4))]));
    }

    #[test]
    fn hypercube_lazy_walk() {
        for dim in 2..=4 {
            let g = hypercube(dim);
            let m = lly_measure(&g, 0, &rat(1, 2)).unwrap();
            assert_eq!(m.mass(0), rat(1, 2));
            for b in 0..dim {
                assert_eq!(m.mass(1 << b), rat(1, 2 * dim as i64));
            }
            assert_eq!(m.len(), dim + 1);
        }
    }

    #[test]
    fn alpha_one_is_dirac() {
        assert_eq!(lly_measure(&complete(4), 2, &one()).unwrap(), dirac(2));
        assert_eq!(dirac(0).total(), one());
        assert_eq!(dirac(0).mass(0), one());
    }

    #[test]
    fn measure_errors() {
        let g = Graph::from_edges(3, false, &[(0, 1)]).unwrap();
        assert_eq!(lly_measure(&g, 2, &zero()), Err(MeasureError::IsolatedVertex(2)));
        assert_eq!(lly_measure(&g, 2, &one()).unwrap(), dirac(2));
        let d = Graph::from_edges(2, true, &[(0, 1)]).unwrap();
        assert_eq!(lly_measure(&d, 0, &zero()), Err(MeasureError::DirectedGraphUseYamada));
        assert_eq!(yamada_measure(&d, 1, &zero()), Err(MeasureError::SinkVertex(1)));
        assert_eq!(yamada_measure(&g, 0, &zero()), Err(MeasureError::UndirectedGraph));
        assert!(matches!(lly_measure(&g, 0, &rat(3, 2)), Err(MeasureError::AlphaOutOfRange(_))));
        assert!(VertexMeasure::new([(0, rat(1, 2))]).is_err());
        assert!(VertexMeasure::new([(0, rat(3, 2)), (1, rat(-1, 2))]).is_err());
    }

    #[test]
    fn yamada_spreads_over_out_neighbors() {
        let g = Graph::from_edges(3, true, &[(0, 1), (0, 2), (1, 0)]).unwrap();
        assert_eq!(yamada_measure(&g, 0, &zero()).unwrap(), measure(&[(1, rat(1, 2)), (2, rat(1, 2))]));
        let cyc = Graph::from_edges(3, true, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(yamada_measure(&cyc, 0, &zero()).unwrap(), dirac(1));
    }

    #[test]
    fn pushforward_examples() {
        let k3 = complete(3);
        assert_eq!(
            pushforward(&k3, &dirac(0), &rat(1, 3)).unwrap(),
            lly_measure(&k3, 0, &rat(1, 3)).unwrap()
        );
        let uniform = measure(&[(0, rat(1, 3)), (1, rat(1, 3)), (2, rat(1, 3))]);
        assert_eq!(pushforward(&k3, &uniform, &zero()).unwrap(), uniform);
        let g = Graph::from_edges(3, false, &[(0, 1)]).unwrap();
        assert_eq!(
            pushforward(&g, &measure(&[(0, rat(1, 2)), (2, rat(1, 2))]), &zero()),
            Err(MeasureError::IsolatedVertex(2))
        );
    }

    #[test]
    fn jump_values() {
        let g = crate::graph::generate::cycle(5);
        assert_eq!(jump(&g, 0, &zero()).unwrap(), one());
        assert_eq!(jump(&g, 2, &rat(1, 2)).unwrap(), rat(1, 2));
        assert_eq!(jump(&g, 3, &one()).unwrap(), zero());
        let d = Graph::from_edges(3, true, &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(jump(&d, 0, &rat(1, 3)).unwrap(), rat(2, 3));
        assert!(matches!(jump(&d, 1, &zero()), Err(MeasureError::SinkVertex(1))));
    }

    #[test]
    fn json_rendering() {
        let m = lly_measure(&complete(3), 0, &rat(1, 2)).unwrap();
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"0":"1/2","1":"1/4","2":"1/4"}"#);
    }

    fn random_measure(n: usize, weights: &[u32]) -> VertexMeasure {
        let total: u32 = weights.iter().take(n).sum::<u32>().max(1);
        if weights.iter().take(n).all(|w| *w == 0) {
            return dirac(0);
        }
        VertexMeasure::new(
            weights.iter().take(n).enumerate().map(|(v, w)| (v, rat(*w as i64, total as i64))),
        )
        .unwrap()
    }

    proptest! {
        #[test]
        fn lly_measures_are_probabilities(n in 2usize..12, seed in any::<u64>(), a in 0i64..=8) {
            let g = crate::graph::generate::random_connected(n, 0.3, seed);
            let alpha = rat(a, 8);
            for x in 0..n {
                let m = lly_measure(&g, x, &alpha).unwrap();
                prop_assert!(m.total().is_one());
                prop_assert_eq!(m.mass(x), alpha.clone());
                for v in m.support() {
                    prop_assert!(v == x || g.has_edge(x, v));
                }
            }
        }

        #[test]
        fn jump_is_one_minus_alpha(n in 2usize..12, seed in any::<u64>(), a in 0i64..=8) {
            let g = crate::graph::generate::random_connected(n, 0.4, seed);
            let alpha = rat(a, 8);
            for x in 0..n {
                prop_assert_eq!(jump(&g, x, &alpha).unwrap(), one() - &alpha);
            }
        }

        #[test]
        fn pushforward_is_affine(
            n in 2usize..10,
            seed in any::<u64>(),
            w1 in proptest::collection::vec(0u32..5, 10),
            w2 in proptest::collection::vec(0u32..5, 10),
            l in 0i64..=6,
            a in 0i64..=4,
        ) {
            let g = crate::graph::generate::random_connected(n, 0.3, seed);
            let alpha = rat(a, 4);
            let lambda = rat(l, 6);
            let mu = random_measure(n, &w1);
            let nu = random_measure(n, &w2);
            let lhs = pushforward(&g, &mu.mix(&lambda, &nu).unwrap(), &alpha).unwrap();
            let rhs = pushforward(&g, &mu, &alpha).unwrap()
                .mix(&lambda, &pushforward(&g, &nu, &alpha).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
