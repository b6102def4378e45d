//! MatrixMarket ingestion and the immutable CSR graph.
//!
//! Raw input is parsed into an [`EdgeList`] that keeps whatever the file
//! contained (self-loops, duplicates, one or both orientations).
//! [`build_graph`] then symmetrizes, drops self-loops and duplicates, and
//! sorts every adjacency sublist, so both MatrixMarket conventions produce the
//! same [`Graph`].

use std::io::{self, BufRead, Read, Write};

/// Vertex ids are 32-bit; edge offsets are 64-bit.
pub type VertexId = u32;

#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("vertex {vertex} out of range (graph has {num_vertices} vertices)")]
    VertexOutOfRange { vertex: u64, num_vertices: usize },
    #[error("invalid CSR cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl GraphError {
    fn parse(line: usize, message: impl Into<String>) -> Self {
        GraphError::Parse {
            line,
            message: message.into(),
        }
    }
}

/// Edges exactly as read from the input, 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeList {
    pub num_vertices_declared: usize,
    pub edges: Vec<(VertexId, VertexId)>,
}

impl EdgeList {
    pub fn new(num_vertices_declared: usize, edges: Vec<(VertexId, VertexId)>) -> Self {
        Self {
            num_vertices_declared,
            edges,
        }
    }
}

/// Parses a MatrixMarket `coordinate` file.
///
/// Value columns are read past and discarded. Both `general` and `symmetric`
/// headers are accepted; orientation is normalized later by [`build_graph`].
pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<EdgeList, GraphError> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (line_no, banner) = match lines.next() {
        Some((n, l)) => (n, l?),
        None => return Err(GraphError::parse(1, "empty input, expected %%MatrixMarket banner")),
    };
    check_banner(line_no, &banner)?;

    let mut size: Option<(usize, usize, usize)> = None;
    let mut last_line = line_no;
    let mut edges = Vec::new();
    let mut num_vertices = 0usize;
    let (mut rows, mut cols, mut nnz) = (0usize, 0usize, 0usize);

    for (line_no, line) in lines {
        let line = line?;
        last_line = line_no;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        if size.is_none() {
            let mut next = |what: &str| -> Result<usize, GraphError> {
                let tok = fields
                    .next()
                    .ok_or_else(|| GraphError::parse(line_no, format!("size line is missing {what}")))?;
                tok.parse::<usize>().map_err(|_| {
                    GraphError::parse(line_no, format!("size line: {what} `{tok}` is not a non-negative integer"))
                })
            };
            rows = next("row count")?;
            cols = next("column count")?;
            nnz = next("entry count")?;
            num_vertices = rows.max(cols);
            if num_vertices > VertexId::MAX as usize {
                return Err(GraphError::parse(
                    line_no,
                    format!("{num_vertices} vertices exceed the 32-bit vertex id range"),
                ));
            }
            size = Some((rows, cols, nnz));
            edges.reserve(nnz);
            continue;
        }

        if edges.len() == nnz {
            return Err(GraphError::parse(
                line_no,
                format!("more entries than the declared {nnz}"),
            ));
        }
        let i = parse_index(line_no, fields.next(), "row", rows)?;
        let j = parse_index(line_no, fields.next(), "column", cols)?;
        edges.push((i, j));
    }

    if size.is_none() {
        return Err(GraphError::parse(last_line + 1, "missing size line `rows cols nnz`"));
    }
    if edges.len() < nnz {
        return Err(GraphError::parse(
            last_line + 1,
            format!("expected {nnz} entries, found {}", edges.len()),
        ));
    }
    Ok(EdgeList::new(num_vertices, edges))
}

/// Convenience wrapper for in-memory text.
pub fn parse_matrix_market_str(text: &str) -> Result<EdgeList, GraphError> {
    parse_matrix_market(text.as_bytes())
}

fn check_banner(line_no: usize, banner: &str) -> Result<(), GraphError> {
    let mut tokens = banner.split_whitespace();
    let bad = |msg: &str| GraphError::parse(line_no, format!("malformed banner: {msg}"));
    if tokens.next() != Some("%%MatrixMarket") {
        return Err(bad("expected `%%MatrixMarket`"));
    }
    if !tokens.next().is_some_and(|t| t.eq_ignore_ascii_case("matrix")) {
        return Err(bad("expected object `matrix`"));
    }
    if !tokens.next().is_some_and(|t| t.eq_ignore_ascii_case("coordinate")) {
        return Err(bad("only `coordinate` format is supported"));
    }
    if let Some(field) = tokens.next() {
        let known = ["pattern", "integer", "real", "complex", "double"];
        if !known.iter().any(|k| field.eq_ignore_ascii_case(k)) {
            return Err(bad(&format!("unknown field `{field}`")));
        }
    }
    if let Some(sym) = tokens.next() {
        let known = ["general", "symmetric", "skew-symmetric", "hermitian"];
        if !known.iter().any(|k| sym.eq_ignore_ascii_case(k)) {
            return Err(bad(&format!("unknown symmetry `{sym}`")));
        }
    }
    Ok(())
}

fn parse_index(line_no: usize, tok: Option<&str>, what: &str, bound: usize) -> Result<VertexId, GraphError> {
    let tok = tok.ok_or_else(|| GraphError::parse(line_no, format!("missing {what} index")))?;
    let idx: u64 = tok
        .parse()
        .map_err(|_| GraphError::parse(line_no, format!("{what} index `{tok}` is not an integer")))?;
    if idx == 0 || idx > bound as u64 {
        return Err(GraphError::parse(
            line_no,
            format!("{what} index {idx} outside 1..={bound}"),
        ));
    }
    Ok((idx - 1) as VertexId)
}

/// What normalization removed while building a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BuildReport {
    pub self_loops: u64,
    /// Directed entries dropped as duplicates after symmetrization.
    pub duplicates: u64,
}

/// Undirected simple graph in CSR form with strictly ascending sublists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    row_offsets: Vec<u64>,
    neighbors: Vec<VertexId>,
    num_edges: u64,
}

/// Per-vertex degrees of a [`Graph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeArray(pub Vec<u32>);

impl DegreeArray {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn max(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&d| d as u64).sum()
    }
}

impl std::ops::Index<usize> for DegreeArray {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

pub fn build_graph(edges: &EdgeList) -> Graph {
    Graph::build_with_report(edges).0
}

pub fn degrees(g: &Graph) -> DegreeArray {
    DegreeArray((0..g.num_vertices()).map(|u| g.degree(u as VertexId)).collect())
}

const CACHE_MAGIC: &[u8; 8] = b"TMCSR\0\0\x01";
const CACHE_VERSION: u32 = 1;

impl Graph {
    /// Empty graph on `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            row_offsets: vec![0; n + 1],
            neighbors: Vec::new(),
            num_edges: 0,
        }
    }

    /// Builds from any edge iterator; see [`build_graph`] for normalization.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        build_graph(&EdgeList::new(n, edges.into_iter().collect()))
    }

    pub fn build_with_report(list: &EdgeList) -> (Self, BuildReport) {
        let n = list.num_vertices_declared;
        let mut report = BuildReport::default();

        let mut counts = vec![0u64; n + 1];
        for &(u, v) in &list.edges {
            if u == v {
                report.self_loops += 1;
                continue;
            }
            counts[u as usize] += 1;
            counts[v as usize] += 1;
        }
        let mut offsets = vec![0u64; n + 1];
        for u in 0..n {
            offsets[u + 1] = offsets[u] + counts[u];
        }
        let mut cursor = offsets.clone();
        let mut scratch = vec![0 as VertexId; offsets[n] as usize];
        for &(u, v) in &list.edges {
            if u == v {
                continue;
            }
            scratch[cursor[u as usize] as usize] = v;
            cursor[u as usize] += 1;
            scratch[cursor[v as usize] as usize] = u;
            cursor[v as usize] += 1;
        }

        let mut row_offsets = Vec::with_capacity(n + 1);
        row_offsets.push(0u64);
        let mut neighbors = Vec::with_capacity(scratch.len());
        for u in 0..n {
            let row = &mut scratch[offsets[u] as usize..offsets[u + 1] as usize];
            row.sort_unstable();
            let before = neighbors.len();
            for &v in row.iter() {
                if neighbors.len() == before || *neighbors.last().unwrap() != v {
                    neighbors.push(v);
                }
            }
            report.duplicates += row.len() as u64 - (neighbors.len() - before) as u64;
            row_offsets.push(neighbors.len() as u64);
        }
        let num_edges = neighbors.len() as u64 / 2;
        (
            Self {
                row_offsets,
                neighbors,
                num_edges,
            },
            report,
        )
    }

    pub fn num_vertices(&self) -> usize {
        self.row_offsets.len() - 1
    }

    /// Undirected edges, each counted once.
    pub fn num_edges(&self) -> u64 {
        self.num_edges
    }

    pub fn row_offsets(&self) -> &[u64] {
        &self.row_offsets
    }

    pub fn neighbor_array(&self) -> &[VertexId] {
        &self.neighbors
    }

    #[inline]
    pub fn neighbors(&self, u: VertexId) -> &[VertexId] {
        let u = u as usize;
        &self.neighbors[self.row_offsets[u] as usize..self.row_offsets[u + 1] as usize]
    }

    #[inline]
    pub fn degree(&self, u: VertexId) -> u32 {
        let u = u as usize;
        (self.row_offsets[u + 1] - self.row_offsets[u]) as u32
    }

    /// Checked adjacency test.
    pub fn has_edge(&self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        let n = self.num_vertices();
        for x in [u, v] {
            if x as usize >= n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: x as u64,
                    num_vertices: n,
                });
            }
        }
        Ok(self.adjacent(u, v))
    }

    /// Binary search in `u`'s sublist. Panics if `u` is out of range.
    #[inline]
    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in CSR order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.num_vertices() as VertexId).flat_map(move |u| {
            let row = self.neighbors(u);
            let start = row.partition_point(|&v| v <= u);
            row[start..].iter().map(move |&v| (u, v))
        })
    }

    pub fn max_degree(&self) -> u32 {
        (0..self.num_vertices())
            .map(|u| self.degree(u as VertexId))
            .max()
            .unwrap_or(0)
    }

    /// Emits the graph as a `pattern symmetric` MatrixMarket file, one
    /// orientation per edge (lower triangle).
    pub fn write_matrix_market<W: Write>(&self, mut out: W) -> io::Result<()> {
        let n = self.num_vertices();
        writeln!(out, "%%MatrixMarket matrix coordinate pattern symmetric")?;
        writeln!(out, "{n} {n} {}", self.num_edges)?;
        for (u, v) in self.edges() {
            writeln!(out, "{} {}", v + 1, u + 1)?;
        }
        out.flush()
    }

    /// Binary cache: magic, version, vertex and edge counts, offsets, and
    /// neighbors, all little-endian fixed width.
    pub fn write_csr_cache<W: Write>(&self, mut out: W) -> io::Result<()> {
        out.write_all(CACHE_MAGIC)?;
        out.write_all(&CACHE_VERSION.to_le_bytes())?;
        out.write_all(&(self.num_vertices() as u64).to_le_bytes())?;
        out.write_all(&self.num_edges.to_le_bytes())?;
        for &o in &self.row_offsets {
            out.write_all(&o.to_le_bytes())?;
        }
        for &v in &self.neighbors {
            out.write_all(&v.to_le_bytes())?;
        }
        out.flush()
    }

    pub fn read_csr_cache<R: Read>(mut input: R) -> Result<Self, GraphError> {
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(GraphError::Cache("bad magic bytes".into()));
        }
        let version = read_u32(&mut input)?;
        if version != CACHE_VERSION {
            return Err(GraphError::Cache(format!("unsupported version {version}")));
        }
        let n = read_u64(&mut input)? as usize;
        let m = read_u64(&mut input)?;
        let mut row_offsets = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            row_offsets.push(read_u64(&mut input)?);
        }
        if row_offsets.last() != Some(&(2 * m)) || row_offsets[0] != 0 {
            return Err(GraphError::Cache("offsets inconsistent with edge count".into()));
        }
        let mut neighbors = Vec::with_capacity(2 * m as usize);
        for _ in 0..2 * m {
            neighbors.push(read_u32(&mut input)?);
        }
        let g = Self {
            row_offsets,
            neighbors,
            num_edges: m,
        };
        g.validate().map_err(GraphError::Cache)?;
        Ok(g)
    }

    /// True if the first bytes look like a CSR cache.
    pub fn is_csr_cache(prefix: &[u8]) -> bool {
        prefix.starts_with(CACHE_MAGIC)
    }

    /// Checks every structural invariant; used on untrusted input.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.num_vertices();
        if self.row_offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err("row offsets decrease".into());
        }
        if *self.row_offsets.last().unwrap() != 2 * self.num_edges {
            return Err("final offset is not twice the edge count".into());
        }
        for u in 0..n as VertexId {
            let row = self.neighbors(u);
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("sublist of {u} is not strictly ascending"));
            }
            for &v in row {
                if v as usize >= n {
                    return Err(format!("neighbor {v} of {u} out of range"));
                }
                if v == u {
                    return Err(format!("self-loop at {u}"));
                }
                if !self.adjacent(v, u) {
                    return Err(format!("edge ({u},{v}) has no mirror"));
                }
            }
        }
        Ok(())
    }
}

fn read_u32<R: Read>(r: &mut R) -> io::Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> io::Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const BANNER: &str = "%%MatrixMarket matrix coordinate pattern general\n";

    fn k3() -> Graph {
        Graph::from_edges(3, [(0, 1), (0, 2), (1, 2)])
    }

    #[test]
    fn parses_smallest_triangle() {
        let text = format!("{BANNER}% comment\n3 3 3\n1 2\n1 3\n2 3\n");
        let el = parse_matrix_market_str(&text).unwrap();
        assert_eq!(el, EdgeList::new(3, vec![(0, 1), (0, 2), (1, 2)]));
    }

    #[test]
    fn keeps_self_loop_at_parse_time() {
        let el = parse_matrix_market_str(&format!("{BANNER}2 2 1\n1 1\n")).unwrap();
        assert_eq!(el, EdgeList::new(2, vec![(0, 0)]));
    }

    #[test]
    fn values_are_discarded_and_rectangular_sizes_use_max() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n2 4 2\n1 4 0.5\n2 3 1e3\n";
        let el = parse_matrix_market_str(text).unwrap();
        assert_eq!(el, EdgeList::new(4, vec![(0, 3), (1, 2)]));
    }

    #[test]
    fn parse_errors_name_the_line() {
        let cases = [
            ("%%MatrixMarkt matrix coordinate pattern general\n1 1 0\n", 1),
            ("%%MatrixMarket matrix array real general\n1 1 0\n", 1),
            (&format!("{BANNER}3 3 1\n1 x\n"), 3),
            (&format!("{BANNER}3 3 1\n1 4\n"), 3),
            (&format!("{BANNER}3 3 1\n0 1\n"), 3),
            (&format!("{BANNER}3 3 2\n1 2\n"), 4),
            (&format!("{BANNER}3 3 1\n1 2\n2 3\n"), 4),
            (&format!("{BANNER}3 three 1\n"), 2),
            (BANNER, 2),
        ];
        for (text, want) in cases {
            match parse_matrix_market_str(text) {
                Err(GraphError::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn builds_k3() {
        let g = k3();
        assert_eq!(g.row_offsets(), &[0, 2, 4, 6]);
        assert_eq!(g.neighbor_array(), &[1, 2, 0, 2, 0, 1]);
        assert_eq!(g.num_edges(), 3);
    }

    #[test]
    fn build_drops_self_loops_and_mirrors() {
        let (g, report) = Graph::build_with_report(&EdgeList::new(2, vec![(0, 0), (0, 1), (1, 0)]));
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.neighbors(0), &[1]);
        assert_eq!(report, BuildReport { self_loops: 1, duplicates: 2 });
    }

    #[test]
    fn isolated_declared_vertices_are_kept() {
        let g = Graph::from_edges(5, [(0, 1)]);
        assert_eq!(g.num_vertices(), 5);
        assert!(g.neighbors(4).is_empty());
    }

    #[test]
    fn k4_and_star_degrees() {
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(degrees(&k4).0, vec![3, 3, 3, 3]);
        assert_eq!(degrees(&k3()).0, vec![2, 2, 2]);
        let star = Graph::from_edges(5, (1..5).map(|v| (0, v)));
        assert_eq!(degrees(&star).0, vec![4, 1, 1, 1, 1]);
    }

    #[test]
    fn has_edge_cases() {
        let g = k3();
        assert!(g.has_edge(0, 2).unwrap());
        assert!(!g.has_edge(0, 0).unwrap());
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]);
        assert!(!path.has_edge(0, 2).unwrap());
        assert!(matches!(
            g.has_edge(0, 3),
            Err(GraphError::VertexOutOfRange { vertex: 3, num_vertices: 3 })
        ));
    }

    #[test]
    fn cache_rejects_corruption() {
        let mut buf = Vec::new();
        k3().write_csr_cache(&mut buf).unwrap();
        assert!(Graph::is_csr_cache(&buf));
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(Graph::read_csr_cache(&bad[..]), Err(GraphError::Cache(_))));
        // Break sortedness of vertex 0's sublist.
        let tail = buf.len() - 6 * 4;
        buf[tail..tail + 4].copy_from_slice(&2u32.to_le_bytes());
        buf[tail + 4..tail + 8].copy_from_slice(&1u32.to_le_bytes());
        assert!(matches!(Graph::read_csr_cache(&buf[..]), Err(GraphError::Cache(_))));
        assert!(Graph::read_csr_cache(&buf[..10]).is_err());
    }

    fn arb_edges() -> impl Strategy<Value = (usize, Vec<(VertexId, VertexId)>)> {
        (1usize..40).prop_flat_map(|n| {
            let v = 0..n as VertexId;
            (Just(n), prop::collection::vec((v.clone(), v), 0..120))
        })
    }

    proptest! {
        #[test]
        fn csr_invariants((n, edges) in arb_edges()) {
            let g = Graph::from_edges(n, edges.iter().copied());
            prop_assert!(g.validate().is_ok());
            let d = degrees(&g);
            prop_assert_eq!(d.sum(), 2 * g.num_edges());
            for u in 0..n as VertexId {
                for &v in g.neighbors(u) {
                    prop_assert!(g.has_edge(v, u).unwrap());
                }
            }
            for &(u, v) in &edges {
                prop_assert_eq!(g.adjacent(u, v), u != v);
            }
        }

        #[test]
        fn matrix_market_round_trip((n, edges) in arb_edges()) {
            let g = Graph::from_edges(n, edges);
            let mut text = Vec::new();
            g.write_matrix_market(&mut text).unwrap();
            let again = build_graph(&parse_matrix_market(&text[..]).unwrap());
            prop_assert_eq!(&again, &g);
            // Re-symmetrizing the graph's own directed entries is a no-op.
            let directed: Vec<_> = (0..n as VertexId)
                .flat_map(|u| g.neighbors(u).iter().map(move |&v| (u, v)))
                .collect();
            prop_assert_eq!(Graph::from_edges(n, directed), g.clone());
            let mut cache = Vec::new();
            g.write_csr_cache(&mut cache).unwrap();
            prop_assert_eq!(Graph::read_csr_cache(&cache[..]).unwrap(), g);
        }
    }
}
