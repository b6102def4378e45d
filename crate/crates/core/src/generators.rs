//! Small deterministic graph families for tests, examples, and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, VertexId};

/// `K_n`.
pub fn complete(n: usize) -> Graph {
    let n32 = n as VertexId;
    Graph::from_edges(n, (0..n32).flat_map(|u| (u + 1..n32).map(move |v| (u, v))))
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n as VertexId).map(|v| (v - 1, v)))
}

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> Graph {
    let n32 = n as VertexId;
    Graph::from_edges(n, (0..n32).map(|v| (v, (v + 1) % n32)))
}

/// Star with center 0 and leaves `1..=leaves`.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves as VertexId).map(|v| (0, v)))
}

/// Erdős–Rényi `G(n, p)`, reproducible from `seed`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Uniform random multigraph sample with `m` edge draws; self-loops and
/// repeats are dropped by normalization, so the result has at most `m` edges.
/// Runs in `O(n + m)`, unlike [`gnp`].
pub fn gnm(n: usize, m: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<_> = (0..m)
        .map(|_| (rng.gen_range(0..n as VertexId), rng.gen_range(0..n as VertexId)))
        .collect();
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        assert_eq!(complete(5).num_edges(), 10);
        assert_eq!(path(4).num_edges(), 3);
        assert_eq!(cycle(4).num_edges(), 4);
        assert_eq!(star(4).num_vertices(), 5);
        assert_eq!(gnp(30, 0.2, 1), gnp(30, 0.2, 1));
        assert_eq!(gnp(30, 0.0, 1).num_edges(), 0);
        let g = gnm(1000, 3000, 2);
        assert!(g.num_edges() <= 3000 && g.num_edges() > 2900);
    }
}
