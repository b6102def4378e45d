use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use trimatch::bench::{self, OutputFormat, RunConfig};
use trimatch::LookAhead;

/// Count triangles (or match a small query graph) in MatrixMarket datasets.
#[derive(Debug, Parser)]
#[command(name = "trimatch", version)]
struct Args {
    /// MatrixMarket file or binary CSR cache.
    #[arg(long)]
    input: Option<PathBuf>,
    /// File listing one dataset path per line.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Built-in query name or inline edge list such as `0-1,1-2,2-0`.
    #[arg(long, default_value = "triangle")]
    query: String,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(0..=2))]
    lookahead: u8,
    /// Write every match, one per line.
    #[arg(long)]
    listings: Option<PathBuf>,
    /// Cross-check counts against the reference counters.
    #[arg(long)]
    validate: bool,
    #[arg(long, default_value = "tsv")]
    format: OutputFormat,
    /// Matcher runs per dataset; the fastest is reported.
    #[arg(long, default_value_t = 1)]
    repeat: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let config = RunConfig {
        input: args.input,
        manifest: args.manifest,
        query: args.query,
        workers: args.workers,
        lookahead: LookAhead::from_k(args.lookahead).expect("range checked by clap"),
        listings: args.listings,
        validate: args.validate,
        format: args.format,
        repeat: args.repeat,
    };

    match bench::run(&config) {
        Ok(report) => {
            for failure in &report.failures {
                eprintln!("trimatch: skipped {}: {}", failure.path.display(), failure.error);
            }
            print!("{}", bench::format_records(&report.records, config.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("trimatch: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
