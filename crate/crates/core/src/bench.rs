//! Driver behind the `trimatch` binary: load a dataset, match, optionally
//! validate against the oracles, and report one benchmark row per dataset.
//!
//! Runtime covers the matcher only (candidate filtering plus verification),
//! never parsing or CSR construction. TEPS is the undirected edge count
//! divided by that runtime in seconds.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::exec::{Executor, ExecutorError};
use crate::graph::{parse_matrix_market, Graph, GraphError};
use crate::matcher::{find_matches, LookAhead, MatchOptions, MatchResult};
use crate::oracle;
use crate::plan::{compile_plan, QueryError, QueryGraph};

pub const TSV_HEADER: &str = "graph\tvertices\tedges\ttriangles\truntime_ms\tteps";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: parse error at {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: GraphError,
    },
    #[error("invalid query: {0}")]
    Query(#[from] QueryError),
    #[error("validation mismatch on {graph}: matcher {matcher}, {oracle} {expected}")]
    Mismatch {
        graph: String,
        matcher: u64,
        oracle: &'static str,
        expected: u64,
    },
    #[error(transparent)]
    Executor(#[from] ExecutorError),
}

impl CliError {
    /// 0 ok, 1 usage, 2 parse, 3 validation mismatch, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Executor(_) => 1,
            CliError::Parse { .. } | CliError::Query(_) => 2,
            CliError::Mismatch { .. } => 3,
            CliError::Io { .. } => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Tsv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tsv" => Ok(OutputFormat::Tsv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected tsv or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
    pub query: String,
    pub workers: usize,
    pub lookahead: LookAhead,
    pub listings: Option<PathBuf>,
    pub validate: bool,
    pub format: OutputFormat,
    pub repeat: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            manifest: None,
            query: "triangle".to_string(),
            workers: 1,
            lookahead: LookAhead::default(),
            listings: None,
            validate: false,
            format: OutputFormat::Tsv,
            repeat: 1,
        }
    }
}

impl RunConfig {
    pub fn for_input(path: impl Into<PathBuf>) -> Self {
        Self {
            input: Some(path.into()),
            ..Self::default()
        }
    }

    pub fn check(&self) -> Result<(), CliError> {
        if self.workers == 0 {
            return Err(CliError::Config("--workers must be at least 1".into()));
        }
        if self.repeat == 0 {
            return Err(CliError::Config("--repeat must be at least 1".into()));
        }
        match (&self.input, &self.manifest) {
            (None, None) => Err(CliError::Config("one of --input or --manifest is required".into())),
            (Some(_), Some(_)) => Err(CliError::Config("--input and --manifest are mutually exclusive".into())),
            (None, Some(_)) if self.listings.is_some() => {
                Err(CliError::Config("--listings applies to a single --input run".into()))
            }
            _ => Ok(()),
        }
    }
}

/// One row of the benchmark table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub graph: String,
    pub vertices: u64,
    pub edges: u64,
    pub triangles: u64,
    pub runtime_ms: f64,
    pub teps: f64,
}

impl BenchRecord {
    pub fn new(graph: impl Into<String>, g: &Graph, triangles: u64, runtime: Duration) -> Self {
        // Clamp to one nanosecond so TEPS stays finite.
        let runtime_ms = (runtime.as_secs_f64() * 1e3).max(1e-6);
        Self {
            graph: graph.into(),
            vertices: g.num_vertices() as u64,
            edges: g.num_edges(),
            triangles,
            runtime_ms,
            teps: g.num_edges() as f64 / (runtime_ms / 1e3),
        }
    }
}

/// A dataset row that could not be produced.
#[derive(Debug)]
pub struct RowFailure {
    pub path: PathBuf,
    pub error: CliError,
}

#[derive(Debug, Default)]
pub struct SuiteReport {
    pub records: Vec<BenchRecord>,
    pub failures: Vec<RowFailure>,
}

/// Dataset name from a path: the file stem without a trailing `_adj`.
pub fn graph_name(path: &Path) -> String {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    stem.strip_suffix("_adj").map(str::to_string).unwrap_or(stem)
}

/// Loads a MatrixMarket file or a binary CSR cache (detected by magic bytes).
pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::open(path).map_err(io_err)?;
    let mut reader = BufReader::with_capacity(1 << 20, file);
    let is_cache = Graph::is_csr_cache(reader.fill_buf().map_err(io_err)?);
    let parse_err = |source: GraphError| match source {
        GraphError::Io(e) => CliError::Io {
            path: path.to_path_buf(),
            source: e,
        },
        other => CliError::Parse {
            path: path.to_path_buf(),
            source: other,
        },
    };
    if is_cache {
        Graph::read_csr_cache(reader).map_err(parse_err)
    } else {
        let edges = parse_matrix_market(reader).map_err(parse_err)?;
        let (g, report) = Graph::build_with_report(&edges);
        if report.self_loops > 0 {
            log::info!("{}: dropped {} self-loops", path.display(), report.self_loops);
        }
        Ok(g)
    }
}

/// Outcome of a single-dataset run.
#[derive(Debug)]
pub struct RunOutcome {
    pub record: BenchRecord,
    pub result: MatchResult,
}

/// Runs the configured query on one dataset `repeat` times and keeps the
/// fastest runtime.
pub fn run_dataset(config: &RunConfig, path: &Path, exec: &Executor) -> Result<RunOutcome, CliError> {
    let name = graph_name(path);
    let g = load_graph(path)?;
    let plan = compile_plan(&QueryGraph::parse(&config.query)?)?;
    let options = MatchOptions::new(config.lookahead, config.listings.is_some());

    let mut best: Option<MatchResult> = None;
    let mut fastest = Duration::MAX;
    for _ in 0..config.repeat {
        let result = find_matches(exec, &g, &plan, &options);
        let elapsed = result.stats.filter_time + result.stats.verify_time;
        fastest = fastest.min(elapsed);
        if let Some(prev) = &best {
            if prev.count != result.count {
                return Err(CliError::Mismatch {
                    graph: name,
                    matcher: result.count,
                    oracle: "previous repeat",
                    expected: prev.count,
                });
            }
        } else {
            best = Some(result);
        }
    }
    let result = best.expect("repeat >= 1");
    log::info!(
        "{name}: {} candidates, filter {:?}, verify {:?}, rows per level {:?}",
        result.stats.candidates,
        result.stats.filter_time,
        result.stats.verify_time,
        result.stats.rows_per_level()
    );

    if config.validate {
        validate(exec, &name, &g, &plan, result.count)?;
    }
    if let (Some(out), Some(rows)) = (&config.listings, &result.listings) {
        write_listings(out, rows).map_err(|source| CliError::Io {
            path: out.clone(),
            source,
        })?;
    }

    Ok(RunOutcome {
        record: BenchRecord::new(name, &g, result.count, fastest),
        result,
    })
}

fn validate(exec: &Executor, name: &str, g: &Graph, plan: &crate::plan::QueryPlan, count: u64) -> Result<(), CliError> {
    if !plan.is_triangle() {
        return Err(CliError::Config("--validate is only available for the triangle query".into()));
    }
    let mismatch = |oracle, expected| CliError::Mismatch {
        graph: name.to_string(),
        matcher: count,
        oracle,
        expected,
    };
    let intersect = oracle::intersect_count_triangles(exec, g);
    if intersect != count {
        return Err(mismatch("intersection count", intersect));
    }
    match oracle::brute_force_triangles(g) {
        Ok(brute) if brute.count != count => return Err(mismatch("brute force", brute.count)),
        Ok(_) => {}
        Err(e) => log::info!("{name}: brute force skipped ({e})"),
    }
    Ok(())
}

/// One tuple per line, space-separated.
pub fn write_listings(path: &Path, rows: &[Vec<u32>]) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                out.write_all(b" ")?;
            }
            write!(out, "{v}")?;
            first = false;
        }
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Reads a manifest: one dataset path per line, `#` comments and blank lines
/// ignored, relative paths resolved against the manifest's directory.
pub fn read_manifest(path: &Path) -> Result<Vec<PathBuf>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new(""));
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let p = PathBuf::from(l);
            if p.is_absolute() {
                p
            } else {
                base.join(p)
            }
        })
        .collect())
}

/// Runs every dataset of a manifest in order. Failing rows are collected and
/// skipped; records come back sorted by graph name.
pub fn bench_suite(config: &RunConfig, manifest: &Path, exec: &Executor) -> Result<SuiteReport, CliError> {
    let mut report = SuiteReport::default();
    for path in read_manifest(manifest)? {
        match run_dataset(config, &path, exec) {
            Ok(outcome) => report.records.push(outcome.record),
            Err(error) => report.failures.push(RowFailure { path, error }),
        }
    }
    report.records.sort_by(|a, b| a.graph.cmp(&b.graph));
    Ok(report)
}

/// Entry point for the binary: a single dataset or a whole manifest.
pub fn run(config: &RunConfig) -> Result<SuiteReport, CliError> {
    config.check()?;
    let exec = Executor::new(config.workers)?;
    if let Some(manifest) = &config.manifest {
        return bench_suite(config, manifest, &exec);
    }
    let input = config.input.as_ref().expect("checked");
    let outcome = run_dataset(config, input, &exec)?;
    Ok(SuiteReport {
        records: vec![outcome.record],
        failures: Vec::new(),
    })
}

pub fn format_tsv(records: &[BenchRecord]) -> String {
    let mut out = String::from(TSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.graph, r.vertices, r.edges, r.triangles, r.runtime_ms, r.teps
        );
    }
    out
}

pub fn format_json(records: &[BenchRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

pub fn format_records(records: &[BenchRecord], format: OutputFormat) -> String {
    match format {
        OutputFormat::Tsv => format_tsv(records),
        OutputFormat::Json => {
            let mut s = format_json(records);
            s.push('\n');
            s
        }
    }
}

/// Inverse of [`format_tsv`].
pub fn parse_tsv(text: &str) -> Result<Vec<BenchRecord>, String> {
    let mut lines = text.lines();
    if lines.next() != Some(TSV_HEADER) {
        return Err("missing TSV header".into());
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 6 {
                return Err(format!("expected 6 columns in `{line}`"));
            }
            let num = |s: &str| s.parse::<u64>().map_err(|e| format!("`{s}`: {e}"));
            let real = |s: &str| s.parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
            Ok(BenchRecord {
                graph: f[0].to_string(),
                vertices: num(f[1])?,
                edges: num(f[2])?,
                triangles: num(f[3])?,
                runtime_ms: real(f[4])?,
                teps: real(f[5])?,
            })
        })
        .collect()
}
