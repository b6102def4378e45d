//! BFS-based triangle counting and small-pattern subgraph matching.
//!
//! The engine works in bulk-synchronous steps over dense frontiers. A query
//! graph is compiled on the host into a [`QueryPlan`] (spanning-tree visit
//! order, non-tree edge checks, and id-ordering constraints that suppress
//! symmetric duplicates). Data-graph vertices are then pruned by degree to a
//! fixpoint, and partial embeddings are grown one query node per step by an
//! all-source BFS, with every step compacting its output table.
//!
//! ```
//! use trimatch::{count_triangles, generators, Executor};
//!
//! let exec = Executor::new(2).unwrap();
//! let g = generators::complete(5);
//! let result = count_triangles(&exec, &g, true);
//! assert_eq!(result.count, 10);
//! ```
//!
//! Module map:
//!
//! - [`graph`]: MatrixMarket ingestion, CSR graph, binary CSR cache.
//! - [`frontier`]: advance / filter / compute / segmented intersection.
//! - [`plan`]: query graphs, spanning trees, equivalence classes, ordering constraints.
//! - [`matcher`]: candidate filtering and level-synchronous verification.
//! - [`oracle`]: reference triangle counters used for validation.
//! - [`bench`]: the driver behind the `trimatch` binary (runs, manifests, TSV/JSON).

pub mod bench;
pub mod exec;
pub mod frontier;
pub mod generators;
pub mod graph;
pub mod matcher;
pub mod oracle;
pub mod plan;

pub use exec::{Executor, ExecutorError};
pub use frontier::{EdgeItem, Frontier, FrontierItem};
pub use graph::{build_graph, degrees, parse_matrix_market, EdgeList, Graph, GraphError, VertexId};
pub use matcher::{
    count_triangles, filter_candidates, find_matches, CandidateSet, LookAhead, MatchOptions,
    MatchResult, PartialTable,
};
pub use plan::{compile_plan, QueryGraph, QueryPlan};
