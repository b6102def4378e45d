//! Test-only reference implementations. None of these touch the matcher,
//! the frontier operators, or the library's oracle module.

#![allow(dead_code)]

use std::collections::VecDeque;

use trimatch::plan::{QueryGraph, QueryPlan};
use trimatch::{generators, Graph, VertexId};

/// Queue-based k-core peeling: vertices with degree < k removed until stable.
pub fn k_core(g: &Graph, k: u32) -> Vec<bool> {
    let n = g.num_vertices();
    let mut deg: Vec<u32> = (0..n as VertexId).map(|u| g.degree(u)).collect();
    let mut alive = vec![true; n];
    let mut queue: VecDeque<VertexId> = (0..n as VertexId).filter(|&u| deg[u as usize] < k).collect();
    for &u in &queue {
        alive[u as usize] = false;
    }
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            let v = v as usize;
            if alive[v] {
                deg[v] -= 1;
                if deg[v] < k {
                    alive[v] = false;
                    queue.push_back(v as VertexId);
                }
            }
        }
    }
    alive
}

/// Every injective map of query nodes to data vertices that sends query
/// edges to data edges, indexed by query node.
pub fn all_embeddings(q: &QueryGraph, g: &Graph) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend_embedding(q, g, &mut current, &mut out);
    out
}

fn extend_embedding(q: &QueryGraph, g: &Graph, current: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
    let node = current.len();
    if node == q.num_nodes() {
        out.push(current.clone());
        return;
    }
    for v in 0..g.num_vertices() as VertexId {
        if current.contains(&v) {
            continue;
        }
        if (0..node).all(|a| !q.adjacent(a, node) || g.adjacent(current[a], v)) {
            current.push(v);
            extend_embedding(q, g, current, out);
            current.pop();
        }
    }
}

/// True if `m` (indexed by query node) satisfies every ordering constraint.
pub fn satisfies_umo(plan: &QueryPlan, m: &[VertexId]) -> bool {
    plan.umo_constraints().iter().all(|c| m[c.smaller] < m[c.larger])
}

/// Number of valid partial embeddings after each level of `plan`: injective
/// maps of the first `L + 1` visited query nodes into `allowed` vertices that
/// respect every query edge and ordering constraint among those nodes.
pub fn partial_embedding_counts(plan: &QueryPlan, g: &Graph, allowed: &[bool]) -> Vec<u64> {
    let order = plan.visit_order().to_vec();
    let q = plan.query().clone();
    let constraints: Vec<(usize, usize)> = plan
        .umo_constraints()
        .iter()
        .map(|c| {
            let pos = |x| order.iter().position(|&o| o == x).unwrap();
            (pos(c.smaller), pos(c.larger))
        })
        .collect();
    let mut counts = vec![0u64; order.len()];
    let mut prefix = Vec::new();

    fn go(
        q: &QueryGraph,
        g: &Graph,
        allowed: &[bool],
        order: &[usize],
        constraints: &[(usize, usize)],
        prefix: &mut Vec<VertexId>,
        counts: &mut [u64],
    ) {
        let level = prefix.len();
        if level == order.len() {
            return;
        }
        for v in 0..g.num_vertices() as VertexId {
            if !allowed[v as usize] || prefix.contains(&v) {
                continue;
            }
            let edges_ok = (0..level).all(|l| !q.adjacent(order[l], order[level]) || g.adjacent(prefix[l], v));
            let order_ok = constraints.iter().all(|&(lo, hi)| {
                if hi == level && lo < level {
                    prefix[lo] < v
                } else if lo == level && hi < level {
                    v < prefix[hi]
                } else {
                    true
                }
            });
            if edges_ok && order_ok {
                counts[level] += 1;
                prefix.push(v);
                go(q, g, allowed, order, constraints, prefix, counts);
                prefix.pop();
            }
        }
    }

    go(&q, g, allowed, &order, &constraints, &mut prefix, &mut counts);
    counts
}

pub struct Instance {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub graph: Graph,
}

/// Deterministic G(n, p) corpus with `n` in `5..=200` and `p` cycling
/// through 0.02, 0.1, 0.3.
pub fn random_corpus(count: usize) -> Vec<Instance> {
    const PS: [f64; 3] = [0.02, 0.1, 0.3];
    (0..count)
        .map(|i| {
            let n = 5 + (i * 37) % 196;
            let p = PS[i % 3];
            let seed = 0x5eed_0000 + i as u64;
            Instance {
                n,
                p,
                seed,
                graph: generators::gnp(n, p, seed),
            }
        })
        .collect()
}
