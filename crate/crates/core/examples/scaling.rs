//! Matcher runtime and TEPS across worker counts on a large random graph.
//!
//! ```text
//! cargo run --release --example scaling -- [vertices] [edges]
//! ```

use std::time::Duration;

use trimatch::bench::BenchRecord;
use trimatch::{count_triangles, generators, Executor};

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let n = args.next().unwrap_or(1_000_000);
    let m = args.next().unwrap_or(1_500_000);
    let g = generators::gnm(n, m, 99);
    let max_workers = std::thread::available_parallelism().map_or(1, |p| p.get());

    let mut workers = 1;
    while workers <= max_workers {
        let exec = Executor::new(workers).unwrap();
        let best = (0..3)
            .map(|_| {
                let r = count_triangles(&exec, &g, false);
                (r.count, r.stats.filter_time + r.stats.verify_time)
            })
            .min_by_key(|&(_, t)| t)
            .unwrap_or((0, Duration::ZERO));
        let rec = BenchRecord::new("gnm", &g, best.0, best.1);
        println!(
            "workers {workers:>2}: triangles {} runtime {:.3} ms, {:.3e} TEPS",
            rec.triangles, rec.runtime_ms, rec.teps
        );
        workers *= 2;
    }
}
