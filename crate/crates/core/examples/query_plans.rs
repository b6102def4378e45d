//! What the host-side compiler derives for a few query shapes.
//!
//! ```text
//! cargo run --example query_plans -- "0-1,1-2,2-3,3-0"
//! ```

use trimatch::plan::{compile_plan, QueryGraph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut queries: Vec<String> = ["triangle", "edge", "path3", "cycle4", "clique4", "star3"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    queries.extend(std::env::args().skip(1));

    for text in queries {
        let q = QueryGraph::parse(&text)?;
        let plan = compile_plan(&q)?;
        println!("{text}: {q:?}");
        println!("  visit order      {:?}", plan.visit_order());
        println!("  tree edges       {:?}", plan.tree().tree_edges());
        println!("  non-tree edges   {:?}", plan.tree().nontree_edge_list());
        for class in plan.nec_classes() {
            println!("  class {:?} ({:?})", class.members, class.flavor);
        }
        let umo: Vec<_> = plan
            .umo_constraints()
            .iter()
            .map(|c| format!("u{} < u{}", c.smaller, c.larger))
            .collect();
        println!("  ordering         [{}]", umo.join(", "));
        println!("  symmetry factor  {}", plan.symmetry_factor());
    }
    Ok(())
}
