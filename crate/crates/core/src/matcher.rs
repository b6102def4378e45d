//! Candidate filtering and level-synchronous verification.
//!
//! Filtering prunes data vertices whose degree among surviving candidates is
//! below the query's minimum degree, repeating until nothing changes. For the
//! triangle this is exactly 2-core peeling.
//!
//! Verification is an all-source BFS over a [`PartialTable`]. Level 0 seeds
//! one row per candidate; each later level advances from the vertex bound to
//! the new node's tree parent and keeps a destination only if it is a
//! candidate, unused in the row, adjacent to the vertices bound to the node's
//! non-tree neighbors, above every ordering lower bound, and not ruled out by
//! look-ahead. Accepted extensions are compacted into a fresh table; rows
//! that produced nothing are dropped.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::exec::Executor;
use crate::frontier::{self, EdgeItem, Frontier, VertexFrontier};
use crate::graph::{Graph, VertexId};
use crate::plan::QueryPlan;

/// Unfilled slot marker inside a partial table row.
pub const UNMATCHED: VertexId = VertexId::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum LookAhead {
    Off,
    One,
    #[default]
    Two,
}

impl LookAhead {
    pub fn from_k(k: u8) -> Option<Self> {
        match k {
            0 => Some(LookAhead::Off),
            1 => Some(LookAhead::One),
            2 => Some(LookAhead::Two),
            _ => None,
        }
    }

    pub fn k(self) -> u8 {
        match self {
            LookAhead::Off => 0,
            LookAhead::One => 1,
            LookAhead::Two => 2,
        }
    }
}

/// Surviving data vertices and their degree within the survivors.
///
/// `effective_degree(u) == |N(u) ∩ members|` holds for every vertex, member
/// or not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    member: Vec<bool>,
    effective_degree: Vec<u32>,
    rounds: usize,
}

impl CandidateSet {
    /// Every vertex, unpruned.
    pub fn all(g: &Graph) -> Self {
        Self {
            member: vec![true; g.num_vertices()],
            effective_degree: (0..g.num_vertices() as VertexId).map(|u| g.degree(u)).collect(),
            rounds: 0,
        }
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.member[v as usize]
    }

    #[inline]
    pub fn effective_degree(&self, v: VertexId) -> u32 {
        self.effective_degree[v as usize]
    }

    pub fn member_flags(&self) -> &[bool] {
        &self.member
    }

    pub fn effective_degrees(&self) -> &[u32] {
        &self.effective_degree
    }

    pub fn members(&self) -> Vec<VertexId> {
        (0..self.member.len() as VertexId).filter(|&v| self.contains(v)).collect()
    }

    pub fn len(&self) -> usize {
        self.member.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Peeling rounds until the fixpoint.
    pub fn rounds(&self) -> usize {
        self.rounds
    }
}

/// Prunes to the fixpoint of "effective degree ≥ minimum query degree".
pub fn filter_candidates(exec: &Executor, g: &Graph, plan: &QueryPlan) -> CandidateSet {
    let threshold = plan.min_degree() as u32;
    let all = VertexFrontier::all_vertices(g);
    let mut effective_degree = frontier::compute(exec, &all, |&v| g.degree(v));
    let mut member = vec![true; g.num_vertices()];
    let mut removing = frontier::filter(exec, &all, |&v| effective_degree[v as usize] < threshold);
    let mut rounds = 0;

    while !removing.is_empty() {
        rounds += 1;
        for &v in removing.iter() {
            member[v as usize] = false;
        }
        let touched = frontier::advance(exec, g, &removing, |_, d| Some(d));
        let mut next = Vec::new();
        for &d in touched.iter() {
            let e = &mut effective_degree[d as usize];
            *e -= 1;
            // Each member crosses below the threshold exactly once.
            if member[d as usize] && *e + 1 == threshold {
                next.push(d);
            }
        }
        removing = Frontier::new(next);
    }

    CandidateSet {
        member,
        effective_degree,
        rounds,
    }
}

/// Fixed-width table of partial embeddings, one row per partial result.
///
/// Slot `i` of a row holds the data vertex bound to the query node visited at
/// level `i`. Every stored row is valid: unfruitful rows are dropped during
/// compaction instead of being masked in place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialTable {
    width: usize,
    filled: usize,
    rows: Vec<VertexId>,
}

impl PartialTable {
    pub fn empty(width: usize, filled: usize) -> Self {
        Self {
            width,
            filled,
            rows: Vec::new(),
        }
    }

    /// One level-0 row per seed vertex.
    pub fn from_seeds(width: usize, seeds: &[VertexId]) -> Self {
        let mut rows = vec![UNMATCHED; seeds.len() * width];
        for (row, &s) in rows.chunks_exact_mut(width).zip(seeds) {
            row[0] = s;
        }
        Self { width, filled: 1, rows }
    }

    /// Builds a table from explicit prefixes, all of length `filled`.
    pub fn from_prefixes(width: usize, prefixes: &[Vec<VertexId>]) -> Self {
        let filled = prefixes.first().map_or(0, Vec::len);
        let mut rows = vec![UNMATCHED; prefixes.len() * width];
        for (row, p) in rows.chunks_exact_mut(width).zip(prefixes) {
            assert_eq!(p.len(), filled, "prefixes must share one length");
            row[..filled].copy_from_slice(p);
        }
        Self { width, filled, rows }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Filled slots per row.
    pub fn filled(&self) -> usize {
        self.filled
    }

    pub fn num_rows(&self) -> usize {
        if self.width == 0 {
            0
        } else {
            self.rows.len() / self.width
        }
    }

    pub fn is_complete(&self) -> bool {
        self.filled == self.width
    }

    /// Filled prefix of row `i`.
    pub fn row(&self, i: usize) -> &[VertexId] {
        &self.rows[i * self.width..i * self.width + self.filled]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[VertexId]> {
        self.rows.chunks_exact(self.width.max(1)).map(|r| &r[..self.filled])
    }

    /// Length of the flat slot array.
    pub fn flat_len(&self) -> usize {
        self.rows.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MatchOptions {
    pub lookahead: LookAhead,
    pub keep_listings: bool,
}

impl MatchOptions {
    pub fn new(lookahead: LookAhead, keep_listings: bool) -> Self {
        Self {
            lookahead,
            keep_listings,
        }
    }
}

/// Per-level bookkeeping. Level 0 is seeding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LevelStats {
    pub level: usize,
    pub input_rows: u64,
    /// Adjacency entries visited by the advance (candidates tested, at level 0).
    pub visited: u64,
    pub lookahead_pruned: u64,
    /// Input rows that produced no extension.
    pub masked_rows: u64,
    pub output_rows: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatchStats {
    pub candidates: u64,
    pub filter_rounds: usize,
    pub levels: Vec<LevelStats>,
    pub filter_time: Duration,
    pub verify_time: Duration,
}

impl MatchStats {
    /// Surviving rows after each level, starting with the seeds.
    pub fn rows_per_level(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.output_rows).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub count: u64,
    pub width: usize,
    /// Complete embeddings indexed by query node, when requested.
    pub listings: Option<Vec<Vec<VertexId>>>,
    pub stats: MatchStats,
}

impl MatchResult {
    /// Size of the flat result array; `count == flat_len / width`.
    pub fn flat_len(&self) -> u64 {
        self.count * self.width as u64
    }
}

/// Necessary condition for `w`, bound at level `prefix.len()`, to reach a
/// complete embedding.
///
/// Assumes `w` already passed the candidate, injectivity, adjacency, and
/// ordering checks. `k = 1` rejects `w` when its candidate neighbors, minus
/// those already used by bound query neighbors, cannot cover the node's
/// unbound query neighbors. `k = 2` also rejects `w` when the next level
/// would find no candidate above its ordering bounds in the adjacency list
/// it will expand from.
pub fn lookahead(
    g: &Graph,
    c: &CandidateSet,
    plan: &QueryPlan,
    prefix: &[VertexId],
    w: VertexId,
    k: LookAhead,
) -> bool {
    if k == LookAhead::Off {
        return true;
    }
    let levels = plan.levels();
    let level = prefix.len();
    let here = &levels[level];
    let spare = c.effective_degree(w) as usize;
    if spare < here.earlier_neighbors || spare - here.earlier_neighbors < here.later_neighbors() {
        return false;
    }
    if k == LookAhead::One || level + 1 >= levels.len() {
        return true;
    }

    let next = &levels[level + 1];
    let image = |l: usize| if l == level { w } else { prefix[l] };
    let parent = next.parent.expect("non-root level has a parent");
    let expand_from = if parent == level || next.nontree.contains(&level) {
        w
    } else {
        prefix[parent]
    };
    let floor = next.lower_bounds.iter().map(|&l| image(l)).max();
    let list = g.neighbors(expand_from);
    let start = floor.map_or(0, |f| list.partition_point(|&x| x <= f));
    list[start..]
        .iter()
        .any(|&x| x != w && c.contains(x) && !prefix.contains(&x))
}

/// Seeds the table with one row per candidate that survives look-ahead.
pub fn seed_table(
    exec: &Executor,
    g: &Graph,
    plan: &QueryPlan,
    c: &CandidateSet,
    k: LookAhead,
) -> (PartialTable, LevelStats) {
    let candidates = frontier::filter(exec, &VertexFrontier::all_vertices(g), |&v| c.contains(v));
    let seeds = frontier::filter(exec, &candidates, |&v| lookahead(g, c, plan, &[], v, k));
    let stats = LevelStats {
        level: 0,
        input_rows: 0,
        visited: candidates.len() as u64,
        lookahead_pruned: (candidates.len() - seeds.len()) as u64,
        masked_rows: 0,
        output_rows: seeds.len() as u64,
    };
    (PartialTable::from_seeds(plan.width(), seeds.items()), stats)
}

/// Extends every row of `m` by one query node and compacts the survivors.
pub fn expand_level(
    exec: &Executor,
    g: &Graph,
    plan: &QueryPlan,
    c: &CandidateSet,
    m: &PartialTable,
    k: LookAhead,
) -> (PartialTable, LevelStats) {
    let level = m.filled();
    assert!(level >= 1 && level < plan.width(), "table level out of range");
    let step = &plan.levels()[level];
    let parent = step.parent.expect("non-root level has a parent");

    let sources: Frontier<EdgeItem> = Frontier::new(exec.install(|| {
        (0..m.num_rows())
            .into_par_iter()
            .map(|i| {
                let row = m.row(i);
                EdgeItem::new(row[level - 1], row[parent], i as u64)
            })
            .collect()
    }));

    let visited = AtomicU64::new(0);
    let pruned = AtomicU64::new(0);
    let accepted = frontier::advance(exec, g, &sources, |item, w| {
        visited.fetch_add(1, Ordering::Relaxed);
        let row = m.row(item.payload as usize);
        let ok = step.lower_bounds.iter().all(|&l| row[l] < w)
            && c.contains(w)
            && !row.contains(&w)
            && step.nontree.iter().all(|&l| g.adjacent(row[l], w));
        if !ok {
            return None;
        }
        if !lookahead(g, c, plan, row, w, k) {
            pruned.fetch_add(1, Ordering::Relaxed);
            return None;
        }
        Some(EdgeItem::new(item.dst, w, item.payload))
    });

    let width = m.width();
    let mut rows = vec![UNMATCHED; accepted.len() * width];
    exec.install(|| {
        rows.par_chunks_mut(width)
            .zip(accepted.items().par_iter())
            .for_each(|(out, e)| {
                out[..level].copy_from_slice(m.row(e.payload as usize));
                out[level] = e.dst;
            });
    });

    let fruitful = accepted
        .items()
        .windows(2)
        .filter(|p| p[0].payload != p[1].payload)
        .count()
        + usize::from(!accepted.is_empty());
    let stats = LevelStats {
        level,
        input_rows: m.num_rows() as u64,
        visited: visited.into_inner(),
        lookahead_pruned: pruned.into_inner(),
        masked_rows: (m.num_rows() - fruitful) as u64,
        output_rows: accepted.len() as u64,
    };
    (
        PartialTable {
            width,
            filled: level + 1,
            rows,
        },
        stats,
    )
}

/// Runs filtering then verification until rows are complete.
pub fn find_matches(exec: &Executor, g: &Graph, plan: &QueryPlan, options: &MatchOptions) -> MatchResult {
    let start = Instant::now();
    let candidates = filter_candidates(exec, g, plan);
    let filter_time = start.elapsed();
    let result = verify(exec, g, plan, &candidates, options);
    MatchResult {
        stats: MatchStats {
            filter_time,
            ..result.stats
        },
        ..result
    }
}

/// Verification only, against a caller-supplied candidate set.
pub fn verify(
    exec: &Executor,
    g: &Graph,
    plan: &QueryPlan,
    candidates: &CandidateSet,
    options: &MatchOptions,
) -> MatchResult {
    let start = Instant::now();
    let k = options.lookahead;
    let (mut table, seed_stats) = seed_table(exec, g, plan, candidates, k);
    let mut levels = vec![seed_stats];
    while !table.is_complete() {
        if table.num_rows() == 0 {
            let mut empty = PartialTable::empty(table.width(), table.filled());
            while !empty.is_complete() {
                levels.push(LevelStats {
                    level: empty.filled(),
                    ..LevelStats::default()
                });
                empty.filled += 1;
            }
            table = empty;
            break;
        }
        let (next, stats) = expand_level(exec, g, plan, candidates, &table, k);
        levels.push(stats);
        table = next;
    }

    let listings = options.keep_listings.then(|| {
        let order = plan.visit_order();
        table
            .rows()
            .map(|row| {
                let mut by_node = vec![UNMATCHED; order.len()];
                for (slot, &node) in order.iter().enumerate() {
                    by_node[node] = row[slot];
                }
                by_node
            })
            .collect()
    });

    MatchResult {
        count: table.num_rows() as u64,
        width: plan.width(),
        listings,
        stats: MatchStats {
            candidates: candidates.len() as u64,
            filter_rounds: candidates.rounds(),
            levels,
            filter_time: Duration::ZERO,
            verify_time: start.elapsed(),
        },
    }
}

/// Triangle counting with the default two-step look-ahead. Listed triples
/// are ascending.
pub fn count_triangles(exec: &Executor, g: &Graph, keep_listings: bool) -> MatchResult {
    let options = MatchOptions::new(LookAhead::default(), keep_listings);
    find_matches(exec, g, &QueryPlan::triangle(), &options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::plan::{compile_plan, QueryGraph};

    fn exec() -> Executor {
        Executor::sequential()
    }

    #[test]
    fn filter_examples() {
        let plan = QueryPlan::triangle();
        let k3 = generators::complete(3);
        let c = filter_candidates(&exec(), &k3, &plan);
        assert_eq!(c.members(), vec![0, 1, 2]);
        assert_eq!(c.effective_degrees(), &[2, 2, 2]);

        let path = generators::path(3);
        let c = filter_candidates(&exec(), &path, &plan);
        assert!(c.is_empty());
        assert_eq!(c.effective_degrees(), &[0, 0, 0]);

        assert!(filter_candidates(&exec(), &generators::star(4), &plan).is_empty());
    }

    #[test]
    fn filter_peels_a_pendant_chain() {
        // Triangle 0-1-2 with a tail 2-3-4-5.
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5)]);
        let c = filter_candidates(&exec(), &g, &QueryPlan::triangle());
        assert_eq!(c.members(), vec![0, 1, 2]);
        assert_eq!(c.rounds(), 3);
        assert_eq!(c.effective_degree(2), 2);
        assert_eq!(c.effective_degree(3), 1);
    }

    #[test]
    fn expand_k3_single_row() {
        let g = generators::complete(3);
        let plan = QueryPlan::triangle();
        let c = filter_candidates(&exec(), &g, &plan);
        let m = PartialTable::from_prefixes(3, &[vec![0, 1]]);
        let (out, stats) = expand_level(&exec(), &g, &plan, &c, &m, LookAhead::Two);
        assert_eq!(out.rows().collect::<Vec<_>>(), vec![&[0, 1, 2][..]]);
        assert_eq!(stats.masked_rows, 0);
    }

    #[test]
    fn expand_k4_edges_to_triangles() {
        let g = generators::complete(4);
        let plan = QueryPlan::triangle();
        let c = filter_candidates(&exec(), &g, &plan);
        let pairs: Vec<Vec<VertexId>> = g.edges().map(|(u, v)| vec![u, v]).collect();
        assert_eq!(pairs.len(), 6);
        let m = PartialTable::from_prefixes(3, &pairs);
        let (out, stats) = expand_level(&exec(), &g, &plan, &c, &m, LookAhead::Off);
        let rows: Vec<_> = out.rows().map(<[VertexId]>::to_vec).collect();
        assert_eq!(rows, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
        // (0,3), (1,3), (2,3) have no larger common neighbor.
        assert_eq!(stats.masked_rows, 3);
        assert_eq!(stats.output_rows, 4);
    }

    #[test]
    fn star_yields_nothing_at_any_level() {
        let g = generators::star(4);
        let r = count_triangles(&exec(), &g, true);
        assert_eq!(r.count, 0);
        assert_eq!(r.stats.rows_per_level(), vec![0, 0, 0]);
        assert_eq!(r.listings.unwrap(), Vec::<Vec<VertexId>>::new());
    }

    #[test]
    fn lookahead_examples() {
        let plan = QueryPlan::triangle();
        let k3 = generators::complete(3);
        let c = CandidateSet::all(&k3);
        assert!(lookahead(&k3, &c, &plan, &[0, 1], 2, LookAhead::Two));

        // Level 1 of the triangle, w = 1 whose only candidate neighbor is 0.
        let path = generators::path(2);
        let c = CandidateSet::all(&path);
        assert!(!lookahead(&path, &c, &plan, &[0], 1, LookAhead::One));
        assert!(lookahead(&path, &c, &plan, &[0], 1, LookAhead::Off));

        // k = 2 at level 0 needs a larger candidate neighbor.
        let k3c = CandidateSet::all(&k3);
        assert!(lookahead(&k3, &k3c, &plan, &[], 1, LookAhead::Two));
        assert!(!lookahead(&k3, &k3c, &plan, &[], 2, LookAhead::Two));
        assert!(lookahead(&k3, &k3c, &plan, &[], 2, LookAhead::One));
    }

    #[test]
    fn counts_small_graphs() {
        let e = exec();
        let r = count_triangles(&e, &generators::complete(3), true);
        assert_eq!(r.count, 1);
        assert_eq!(r.listings.as_deref(), Some(&[vec![0, 1, 2]][..]));
        assert_eq!(r.flat_len(), 3);
        assert_eq!(count_triangles(&e, &generators::complete(4), false).count, 4);
        assert_eq!(count_triangles(&e, &Graph::empty(0), false).count, 0);
        assert_eq!(count_triangles(&e, &Graph::empty(7), false).count, 0);
    }

    #[test]
    fn single_edge_query_counts_each_edge_once() {
        let g = generators::gnp(40, 0.2, 3);
        let plan = compile_plan(&QueryGraph::path(2)).unwrap();
        for k in [LookAhead::Off, LookAhead::One, LookAhead::Two] {
            let r = find_matches(&exec(), &g, &plan, &MatchOptions::new(k, false));
            assert_eq!(r.count, g.num_edges());
        }
    }

    #[test]
    fn k4_query_on_k5() {
        let plan = compile_plan(&QueryGraph::clique(4)).unwrap();
        let r = find_matches(&exec(), &generators::complete(5), &plan, &MatchOptions::default());
        assert_eq!(r.count, 5);
    }

    #[test]
    fn lookahead_from_k() {
        assert_eq!(LookAhead::from_k(1), Some(LookAhead::One));
        assert_eq!(LookAhead::from_k(3), None);
        assert_eq!(LookAhead::default().k(), 2);
    }
}
