//! Run a manifest of datasets and print the benchmark table in both formats.
//!
//! ```text
//! cargo run --release --example bench_manifest -- [manifest.txt]
//! ```
//!
//! Without an argument, a few synthetic datasets are written to a temporary
//! directory first.

use std::path::PathBuf;

use trimatch::bench::{self, RunConfig};
use trimatch::{generators, Executor, Graph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scratch = std::env::temp_dir().join("trimatch-bench-example");
    let manifest = match std::env::args().nth(1) {
        Some(m) => PathBuf::from(m),
        None => {
            std::fs::create_dir_all(&scratch)?;
            let graphs: [(&str, Graph); 4] = [
                ("k3", generators::complete(3)),
                ("k4", generators::complete(4)),
                ("star4", generators::star(4)),
                ("gnm-100k", generators::gnm(50_000, 100_000, 3)),
            ];
            let mut list = String::new();
            for (name, g) in &graphs {
                let path = scratch.join(format!("{name}.mtx"));
                g.write_matrix_market(std::fs::File::create(&path)?)?;
                list.push_str(&format!("{}\n", path.display()));
            }
            let m = scratch.join("manifest.txt");
            std::fs::write(&m, list)?;
            m
        }
    };

    let config = RunConfig {
        manifest: Some(manifest.clone()),
        validate: true,
        repeat: 3,
        workers: 4,
        ..RunConfig::default()
    };
    let report = bench::bench_suite(&config, &manifest, &Executor::new(config.workers)?)?;
    for f in &report.failures {
        eprintln!("skipped {}: {}", f.path.display(), f.error);
    }
    print!("{}", bench::format_tsv(&report.records));
    println!("{}", bench::format_json(&report.records));
    Ok(())
}
