//! Successive shortest augmenting paths on the bipartite transportation
//! network, in exact rational arithmetic.
//!
//! Node layout: super source `0`, sources `1..=a`, targets `a+1..=a+b`,
//! super sink `a+b+1`. Source/target arcs carry the marginal masses; middle
//! arcs are effectively uncapacitated (capacity 2 exceeds the total mass 1).

use crate::rational::{int, Rational};
use num_traits::{Signed, Zero};

struct Arc {
    to: usize,
    rev: usize,
    cap: Rational,
    cost: Rational,
}

pub(crate) struct FlowResult {
    /// `(source index, target index, mass)` for every middle arc carrying flow,
    /// in arc insertion order.
    pub flows: Vec<(usize, usize, Rational)>,
    pub total: Rational,
}

pub(crate) struct TransportNetwork {
    arcs: Vec<Vec<Arc>>,
    /// `(source index, target index, node, arc index)` of each middle arc.
    middle: Vec<(usize, usize, usize, usize)>,
}

impl TransportNetwork {
    /// `costs[i][j] == None` means the pair cannot carry mass.
    pub fn new(supply: &[Rational], demand: &[Rational], costs: &[Vec<Option<Rational>>]) -> Self {
        let a = supply.len();
        let b = demand.len();
        let mut net = Self { arcs: (0..a + b + 2).map(|_| Vec::new()).collect(), middle: Vec::new() };
        let sink = a + b + 1;
        for (i, s) in supply.iter().enumerate() {
            net.add_arc(0, 1 + i, s.clone(), Rational::zero());
        }
        for (i, row) in costs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if let Some(c) = c {
                    let idx = net.add_arc(1 + i, 1 + a + j, int(2), c.clone());
                    net.middle.push((i, j, 1 + i, idx));
                }
            }
        }
        for (j, d) in demand.iter().enumerate() {
            net.add_arc(1 + a + j, sink, d.clone(), Rational::zero());
        }
        net
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: Rational, cost: Rational) -> usize {
        let fwd = self.arcs[from].len();
        let bwd = self.arcs[to].len() + usize::from(from == to);
        self.arcs[from].push(Arc { to, rev: bwd, cap, cost: cost.clone() });
        self.arcs[to].push(Arc { to: from, rev: fwd, cap: Rational::zero(), cost: -cost });
        fwd
    }

    /// Pushes as much mass (up to `limit`) as the finite-cost arcs allow, at
    /// minimum cost. Uses reduced costs `cost + dual[from] - dual[to] >= 0`.
    pub fn solve(mut self, limit: &Rational) -> FlowResult {
        let n = self.arcs.len();
        let (s, t) = (0, n - 1);
        let mut dual: Vec<Rational> = vec![Rational::zero(); n];
        let mut total = Rational::zero();
        let mut dist: Vec<Option<Rational>> = vec![None; n];
        let mut visited = vec![false; n];
        let mut prev: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX); n];
        while &total < limit {
            dist.iter_mut().for_each(|d| *d = None);
            visited.iter_mut().for_each(|v| *v = false);
            dist[s] = Some(Rational::zero());
            loop {
                // Dense Dijkstra: smallest tentative distance, ties to the lowest node id.
                let mut best: Option<usize> = None;
                for v in 0..n {
                    if visited[v] {
                        continue;
                    }
                    if let Some(dv) = &dist[v] {
                        if best.is_none_or(|b| dv < dist[b].as_ref().expect("tentative")) {
                            best = Some(v);
                        }
                    }
                }
                let Some(v) = best else { break };
                visited[v] = true;
                if v == t {
                    break;
                }
                let dv = dist[v].clone().expect("settled");
                for (k, arc) in self.arcs[v].iter().enumerate() {
                    if !arc.cap.is_positive() || visited[arc.to] {
                        continue;
                    }
                    let reduced = &arc.cost + &dual[v] - &dual[arc.to];
                    debug_assert!(!reduced.is_negative(), "reduced costs stay nonnegative");
                    let cand = &dv + reduced;
                    if dist[arc.to].as_ref().is_none_or(|cur| &cand < cur) {
                        dist[arc.to] = Some(cand);
                        prev[arc.to] = (v, k);
                    }
                }
            }
            if !visited[t] {
                break;
            }
            let dt = dist[t].clone().expect("sink reached");
            for v in 0..n {
                if visited[v] {
                    let dv = dist[v].as_ref().expect("settled");
                    dual[v] -= &dt - dv;
                }
            }
            let mut push = limit - &total;
            let mut v = t;
            while v != s {
                let (u, k) = prev[v];
                if self.arcs[u][k].cap < push {
                    push = self.arcs[u][k].cap.clone();
                }
                v = u;
            }
            let mut v = t;
            while v != s {
                let (u, k) = prev[v];
                let rev = self.arcs[u][k].rev;
                self.arcs[u][k].cap -= &push;
                self.arcs[v][rev].cap += &push;
                v = u;
            }
            total += push;
        }
        let flows = self
            .middle
            .iter()
            .filter_map(|&(i, j, node, idx)| {
                let arc = &self.arcs[node][idx];
                let used = int(2) - &arc.cap;
                used.is_positive().then_some((i, j, used))
            })
            .collect();
        FlowResult { flows, total }
    }
}

/// Potentials `pot` over sources `0..a` and targets `a..a+b` with
/// `pot[a+j] - pot[i] <= c(i,j)` for every finite pair and equality wherever
/// the flow is positive. Bellman-Ford from a virtual root on the residual graph.
pub(crate) fn residual_potentials(
    a: usize,
    b: usize,
    costs: &[Vec<Option<Rational>>],
    flows: &[(usize, usize, Rational)],
) -> Vec<Rational> {
    let mut edges: Vec<(usize, usize, Rational)> = Vec::new();
    for (i, row) in costs.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if let Some(c) = c {
                edges.push((i, a + j, c.clone()));
            }
        }
    }
    for (i, j, _) in flows {
        let c = costs[*i][*j].clone().expect("flow only on finite pairs");
        edges.push((a + j, *i, -c));
    }
    let mut pot: Vec<Rational> = vec![Rational::zero(); a + b];
    for _ in 0..=(a + b) {
        let mut changed = false;
        for (u, v, c) in &edges {
            let cand = &pot[*u] + c;
            if cand < pot[*v] {
                pot[*v] = cand;
                changed = true;
            }
        }
        if !changed {
            return pot;
        }
    }
    panic!("negative residual cycle: flow is not optimal");
}
