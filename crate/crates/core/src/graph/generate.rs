//! Graph families and random generators.
//!
//! The stochastic block model draws each pair from a counter-based PRNG keyed
//! by `(seed, u, v)`, so the sampled edge set does not depend on iteration
//! order or on how the pairs are split across workers.

use super::{Graph, GraphError, Vertex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform draw in `[0, 1)` keyed by `(seed, u, v)`. Ordered: `(u, v)` and
/// `(v, u)` are independent keys.
pub fn pair_uniform(seed: u64, u: Vertex, v: Vertex) -> f64 {
    let h = mix64(mix64(mix64(seed) ^ u as u64) ^ (v as u64).rotate_left(32));
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Stochastic block model with `k` balanced blocks assigned round-robin.
///
/// Returns the graph and the block label of each vertex.
pub fn sbm_generate(
    n: usize,
    k: usize,
    p_in: f64,
    p_out: f64,
    directed: bool,
    seed: u64,
) -> Result<(Graph, Vec<usize>), GraphError> {
    let valid = |p: f64| p.is_finite() && (0.0..=1.0).contains(&p);
    if !valid(p_in) || !valid(p_out) || p_out > p_in {
        return Err(GraphError::InvalidProbability(format!(
            "need 0 <= p_out <= p_in <= 1, got p_in={p_in}, p_out={p_out}"
        )));
    }
    if k == 0 || n < k {
        return Err(GraphError::InvalidParameters(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    let labels: Vec<usize> = (0..n).map(|v| v % k).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || (!directed && v < u) {
                continue;
            }
            let p = if labels[u] == labels[v] { p_in } else { p_out };
            if pair_uniform(seed, u, v) < p {
                edges.push((u, v));
            }
        }
    }
    Ok((Graph::from_edges(n, directed, &edges)?, labels))
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Graph::from_edges(n, false, &edges).expect("complete graph")
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_edges(n, false, &edges).expect("path graph")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    Graph::from_edges(n, false, &edges).expect("cycle graph")
}

/// Star with center `0` and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    Graph::from_edges(leaves + 1, false, &edges).expect("star graph")
}

/// The discrete cube `{0,1}^dim` with Hamming adjacency.
pub fn hypercube(dim: usize) -> Graph {
    let n = 1usize << dim;
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (0..dim).map(move |b| (u, u ^ (1 << b))))
        .filter(|(u, v)| u < v)
        .collect();
    Graph::from_edges(n, false, &edges).expect("hypercube")
}

/// Two `K_k` cliques on `0..k` and `k..2k` joined by the bridge `(k-1, k)`.
pub fn barbell(k: usize) -> Graph {
    let mut edges = Vec::new();
    for offset in [0, k] {
        for u in 0..k {
            for v in u + 1..k {
                edges.push((offset + u, offset + v));
            }
        }
    }
    edges.push((k - 1, k));
    Graph::from_edges(2 * k, false, &edges).expect("barbell")
}

/// Uniform random recursive tree: vertex `v` attaches to a uniform earlier
/// vertex, then ids are shuffled.
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(&mut rng);
    let edges: Vec<_> = (1..n)
        .map(|v| {
            let parent = rng.random_range(0..v);
            (perm[parent], perm[v])
        })
        .collect();
    Graph::from_edges(n, false, &edges).expect("tree")
}

/// A random spanning tree plus each remaining pair independently with
/// probability `extra_p`. Always connected.
pub fn random_connected(n: usize, extra_p: f64, seed: u64) -> Graph {
    let tree = random_tree(n, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5_5A5A_DEAD_BEEF);
    let mut edges = tree.edges();
    for u in 0..n {
        for v in u + 1..n {
            if !tree.has_edge(u, v) && rng.random_bool(extra_p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, false, &edges).expect("connected graph")
}

/// Each ordered pair becomes an arc independently with probability `p`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    Graph::from_edges(n, true, &arcs).expect("digraph")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_sbm_gives_two_k5() {
        let (g, labels) = sbm_generate(10, 2, 1.0, 0.0, false, 7).unwrap();
        assert_eq!(g.edge_count(), 20);
        assert_eq!(g.component_count(), 2);
        for (u, v) in g.edges() {
            assert_eq!(labels[u], labels[v]);
        }
        for v in 0..10 {
            assert_eq!(g.degree(v), 4);
        }
    }

    #[test]
    fn single_block_full_probability_is_complete() {
        let (g, _) = sbm_generate(6, 1, 1.0, 1.0, false, 1).unwrap();
        assert_eq!(g, complete(6));
    }

    #[test]
    fn sbm_is_a_pure_function_of_its_arguments() {
        let a = sbm_generate(40, 3, 0.4, 0.05, false, 99).unwrap();
        let b = sbm_generate(40, 3, 0.4, 0.05, false, 99).unwrap();
        assert_eq!(a, b);
        let c = sbm_generate(40, 3, 0.4, 0.05, false, 100).unwrap();
        assert_ne!(a.0, c.0);
        let d1 = sbm_generate(30, 2, 0.3, 0.1, true, 5).unwrap();
        let d2 = sbm_generate(30, 2, 0.3, 0.1, true, 5).unwrap();
        assert_eq!(d1, d2);
        assert!(d1.0.is_directed());
    }

    #[test]
    fn sbm_rejects_bad_probabilities() {
        assert!(matches!(sbm_generate(10, 2, 0.1, 0.2, false, 0), Err(GraphError::InvalidProbability(_))));
        assert!(matches!(sbm_generate(10, 2, 1.5, 0.2, false, 0), Err(GraphError::InvalidProbability(_))));
        assert!(matches!(sbm_generate(10, 2, f64::NAN, 0.0, false, 0), Err(GraphError::InvalidProbability(_))));
        assert!(matches!(sbm_generate(3, 4, 0.5, 0.1, false, 0), Err(GraphError::InvalidParameters(_))));
    }

    #[test]
    fn pair_uniform_is_in_unit_interval_and_ordered() {
        for u in 0..20 {
            for v in 0..20 {
                let x = pair_uniform(3, u, v);
                assert!((0.0..1.0).contains(&x));
            }
        }
        assert_ne!(pair_uniform(3, 1, 2), pair_uniform(3, 2, 1));
    }

    #[test]
    fn families_have_expected_sizes() {
        assert_eq!(hypercube(3).edge_count(), 12);
        assert_eq!(barbell(4).edge_count(), 13);
        assert_eq!(star(4).edge_count(), 4);
        for seed in 0..20 {
            let t = random_tree(15, seed);
            assert_eq!(t.edge_count(), 14);
            assert!(t.is_connected());
            assert!(random_connected(12, 0.3, seed).is_connected());
        }
    }
}
