//! Reference triangle counters. Both are deliberately simple and share no
//! code path with the matcher beyond the CSR graph itself.

use crate::exec::Executor;
use crate::frontier::{self, EdgeItem, IntersectRange, VertexFrontier};
use crate::graph::{Graph, VertexId};

/// Below this many vertices the brute force checks every vertex triple.
pub const TRIPLE_LOOP_MAX_VERTICES: usize = 300;
/// Largest `|E| * max_degree` the edge-driven brute force will take on.
pub const BRUTE_FORCE_WORK_LIMIT: u64 = 4_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("graph too large for brute force: estimated {work} probes exceeds {limit}")]
    TooLarge { work: u64, limit: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OracleResult {
    pub count: u64,
    /// Ascending triples in lexicographic order.
    pub triples: Vec<[VertexId; 3]>,
}

/// Estimated adjacency probes for [`brute_force_triangles`].
pub fn brute_force_work(g: &Graph) -> u64 {
    let n = g.num_vertices() as u64;
    if g.num_vertices() <= TRIPLE_LOOP_MAX_VERTICES {
        n * n.saturating_sub(1) * n.saturating_sub(2) / 6
    } else {
        g.num_edges() * g.max_degree() as u64
    }
}

/// Lists every triangle by direct adjacency tests.
///
/// Small graphs check all `a < b < c`; larger ones walk each edge `(a, b)`
/// and test every `c > b` adjacent to `a` for adjacency to `b`.
pub fn brute_force_triangles(g: &Graph) -> Result<OracleResult, OracleError> {
    let work = brute_force_work(g);
    if work > BRUTE_FORCE_WORK_LIMIT {
        return Err(OracleError::TooLarge {
            work,
            limit: BRUTE_FORCE_WORK_LIMIT,
        });
    }
    let n = g.num_vertices() as VertexId;
    let mut triples = Vec::new();
    if g.num_vertices() <= TRIPLE_LOOP_MAX_VERTICES {
        for a in 0..n {
            for b in a + 1..n {
                if !g.adjacent(a, b) {
                    continue;
                }
                for c in b + 1..n {
                    if g.adjacent(a, c) && g.adjacent(b, c) {
                        triples.push([a, b, c]);
                    }
                }
            }
        }
    } else {
        for (a, b) in g.edges() {
            for &c in g.neighbors(a) {
                if c > b && g.adjacent(b, c) {
                    triples.push([a, b, c]);
                }
            }
        }
    }
    Ok(OracleResult {
        count: triples.len() as u64,
        triples,
    })
}

/// Sum over edges `u < v` of `|{w ∈ N(u) ∩ N(v) : w > v}|`.
pub fn intersect_count_triangles(exec: &Executor, g: &Graph) -> u64 {
    let pairs = frontier::advance(exec, g, &VertexFrontier::all_vertices(g), |&u, v| {
        (v > u).then_some(EdgeItem::new(u, v, 0))
    });
    frontier::segmented_intersect(exec, g, &pairs, IntersectRange::AboveBoth, false).total()
}
