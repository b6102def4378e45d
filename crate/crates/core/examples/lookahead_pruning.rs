//! Effect of 0-, 1-, and 2-step look-ahead on intermediate table sizes.
//!
//! ```text
//! cargo run --release --example lookahead_pruning
//! ```

use trimatch::plan::{compile_plan, QueryGraph};
use trimatch::{find_matches, generators, Executor, LookAhead, MatchOptions};

fn main() {
    let exec = Executor::new(4).unwrap();
    let g = generators::gnp(3000, 0.004, 7);
    for query in [QueryGraph::triangle(), QueryGraph::clique(4)] {
        let plan = compile_plan(&query).unwrap();
        println!("{query:?}");
        println!("  k  count     rows per level                       pruned per level");
        for k in [LookAhead::Off, LookAhead::One, LookAhead::Two] {
            let r = find_matches(&exec, &g, &plan, &MatchOptions::new(k, false));
            let pruned: Vec<u64> = r.stats.levels.iter().map(|l| l.lookahead_pruned).collect();
            println!(
                "  {}  {:<8}  {:<36} {:?}",
                k.k(),
                r.count,
                format!("{:?}", r.stats.rows_per_level()),
                pruned
            );
        }
    }
}
