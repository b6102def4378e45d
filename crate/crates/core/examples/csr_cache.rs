//! Convert a MatrixMarket file into the binary CSR cache and load it back.
//!
//! ```text
//! cargo run --release --example csr_cache -- input.mtx output.csr
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;
use std::time::Instant;

use trimatch::{bench, generators, Graph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (g, out) = match args.as_slice() {
        [input, output] => (bench::load_graph(Path::new(input))?, output.clone()),
        _ => {
            let out = std::env::temp_dir().join("trimatch-example.csr");
            (generators::gnm(100_000, 400_000, 5), out.display().to_string())
        }
    };

    g.write_csr_cache(BufWriter::new(File::create(&out)?))?;
    let start = Instant::now();
    let back = Graph::read_csr_cache(BufReader::new(File::open(&out)?))?;
    println!(
        "wrote {out}: |V|={} |E|={}, reloaded in {:?}, identical: {}",
        back.num_vertices(),
        back.num_edges(),
        start.elapsed(),
        back == g
    );
    Ok(())
}
