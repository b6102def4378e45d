//! Cross-check the matcher against both reference counters.
//!
//! ```text
//! cargo run --release --example validate_oracles -- [graph.mtx]
//! ```

use std::path::Path;

use trimatch::oracle::{brute_force_triangles, intersect_count_triangles};
use trimatch::{bench, count_triangles, generators, Executor, Graph};

fn check(exec: &Executor, label: &str, g: &Graph) -> bool {
    let matcher = count_triangles(exec, g, false).count;
    let intersect = intersect_count_triangles(exec, g);
    let brute = match brute_force_triangles(g) {
        Ok(r) => r.count.to_string(),
        Err(e) => format!("skipped ({e})"),
    };
    let ok = matcher == intersect && (brute == matcher.to_string() || brute.starts_with("skipped"));
    println!("{label:<28} matcher {matcher:<8} intersect {intersect:<8} brute {brute:<8} {}", if ok { "ok" } else { "MISMATCH" });
    ok
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let exec = Executor::new(4)?;
    let mut ok = true;
    if let Some(path) = std::env::args().nth(1) {
        let g = bench::load_graph(Path::new(&path))?;
        ok &= check(&exec, &path, &g);
    } else {
        for (i, p) in [0.02, 0.1, 0.3].into_iter().enumerate() {
            for n in [20, 80, 200] {
                let g = generators::gnp(n, p, i as u64 * 1000 + n as u64);
                ok &= check(&exec, &format!("G({n}, {p})"), &g);
            }
        }
    }
    if !ok {
        std::process::exit(3);
    }
    Ok(())
}
