//! Count and list triangles in a MatrixMarket file (or a built-in demo graph).
//!
//! ```text
//! cargo run --release --example count_triangles -- path/to/graph.mtx [workers]
//! ```

use std::path::Path;

use trimatch::{bench, count_triangles, generators, Executor};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let (name, g) = match args.next() {
        Some(path) => (bench::graph_name(Path::new(&path)), bench::load_graph(Path::new(&path))?),
        None => ("gnp(2000, 0.01)".to_string(), generators::gnp(2000, 0.01, 42)),
    };
    let workers = args.next().map(|w| w.parse()).transpose()?.unwrap_or(4);
    let exec = Executor::new(workers)?;

    let result = count_triangles(&exec, &g, true);
    println!(
        "{name}: |V|={} |E|={} triangles={} ({} candidates after filtering)",
        g.num_vertices(),
        g.num_edges(),
        result.count,
        result.stats.candidates
    );
    println!(
        "filter {:?}, verify {:?}",
        result.stats.filter_time, result.stats.verify_time
    );
    for t in result.listings.unwrap().iter().take(5) {
        println!("  {} {} {}", t[0], t[1], t[2]);
    }
    Ok(())
}
