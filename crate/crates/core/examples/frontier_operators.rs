//! The four frontier operators on a small graph.
//!
//! ```text
//! cargo run --example frontier_operators
//! ```

use trimatch::frontier::{self, EdgeItem, IntersectRange, VertexFrontier};
use trimatch::{Executor, Graph};

fn main() {
    // Two triangles sharing the edge 1-2, plus a pendant vertex 4.
    let g = Graph::from_edges(5, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 4)]);
    let exec = Executor::new(2).unwrap();
    let all = VertexFrontier::all_vertices(&g);

    let degrees = frontier::compute(&exec, &all, |&v| g.degree(v));
    println!("compute  degree per vertex: {degrees:?}");

    let busy = frontier::filter(&exec, &all, |&v| g.degree(v) >= 2);
    println!("filter   degree >= 2: {:?}", busy.items());

    // Oriented edges u < v, carrying their index as payload.
    let oriented = frontier::advance(&exec, &g, &all, |&u, v| (v > u).then_some(EdgeItem::new(u, v, 0)));
    println!("advance  oriented edges: {:?}", oriented.iter().map(|e| (e.src, e.dst)).collect::<Vec<_>>());

    let common = frontier::segmented_intersect(&exec, &g, &oriented, IntersectRange::AboveBoth, true);
    for (e, w) in oriented.iter().zip(common.listings.unwrap()) {
        if !w.is_empty() {
            println!("intersect ({}, {}) closes triangles with {w:?}", e.src, e.dst);
        }
    }
    println!("triangles: {}", common.counts.iter().sum::<u64>());
}
