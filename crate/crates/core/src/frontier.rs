//! Bulk-synchronous frontier operators.
//!
//! Every operator is a single synchronous step: it runs in parallel over the
//! frontier inside an [`Executor`] and returns a fully materialized, dense
//! output. Outputs are produced with a count / prefix-sum / scatter scheme over
//! contiguous work chunks whose boundaries depend only on the input, so the
//! output sequence is the same for any worker count.

use rayon::prelude::*;

use crate::exec::Executor;
use crate::graph::{Graph, VertexId};

/// Edges visited per advance work chunk.
const ADVANCE_CHUNK_WORK: u64 = 4096;
/// Items per filter / intersect work chunk.
const ITEM_CHUNK: usize = 1024;
/// Length ratio at which intersection switches from merge to binary probing.
pub const PROBE_RATIO: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontierKind {
    Vertex,
    Edge,
}

/// Anything an advance can expand from.
pub trait FrontierItem: Copy + Send + Sync {
    const KIND: FrontierKind;
    /// The vertex whose adjacency an advance visits.
    fn vertex(&self) -> VertexId;
}

impl FrontierItem for VertexId {
    const KIND: FrontierKind = FrontierKind::Vertex;
    fn vertex(&self) -> VertexId {
        *self
    }
}

/// Edge record: `payload` usually carries a row or pair index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EdgeItem {
    pub src: VertexId,
    pub dst: VertexId,
    pub payload: u64,
}

impl EdgeItem {
    pub fn new(src: VertexId, dst: VertexId, payload: u64) -> Self {
        Self { src, dst, payload }
    }
}

impl FrontierItem for EdgeItem {
    const KIND: FrontierKind = FrontierKind::Edge;
    fn vertex(&self) -> VertexId {
        self.dst
    }
}

/// Dense sequence of active items.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Frontier<T> {
    items: Vec<T>,
}

pub type VertexFrontier = Frontier<VertexId>;
pub type EdgeFrontier = Frontier<EdgeItem>;

impl<T> Frontier<T> {
    pub fn new(items: Vec<T>) -> Self {
        Self { items }
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn into_items(self) -> Vec<T> {
        self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.items.iter()
    }
}

impl<T: FrontierItem> Frontier<T> {
    pub fn kind(&self) -> FrontierKind {
        T::KIND
    }
}

impl VertexFrontier {
    /// Every vertex of `g`, ascending.
    pub fn all_vertices(g: &Graph) -> Self {
        Self::new((0..g.num_vertices() as VertexId).collect())
    }
}

impl<T> FromIterator<T> for Frontier<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Exclusive prefix sum; returns the offsets and the total.
pub fn exclusive_scan(counts: &[usize]) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(counts.len());
    let mut acc = 0usize;
    for &c in counts {
        offsets.push(acc);
        acc += c;
    }
    (offsets, acc)
}

/// Concatenates per-chunk outputs into one dense buffer: chunk lengths are
/// scanned into offsets and each chunk is scattered into its own disjoint
/// slice in parallel.
pub fn compact<U: Copy + Send + Sync + Default>(parts: Vec<Vec<U>>) -> Vec<U> {
    let lens: Vec<usize> = parts.iter().map(Vec::len).collect();
    let (_, total) = exclusive_scan(&lens);
    if parts.len() == 1 {
        return parts.into_iter().next().unwrap();
    }
    let mut out = vec![U::default(); total];
    let mut slices = Vec::with_capacity(parts.len());
    let mut rest = out.as_mut_slice();
    for &len in &lens {
        let (head, tail) = rest.split_at_mut(len);
        slices.push(head);
        rest = tail;
    }
    slices
        .into_par_iter()
        .zip(parts.par_iter())
        .for_each(|(dst, src)| dst.copy_from_slice(src));
    out
}

/// Splits `items` into contiguous ranges holding roughly
/// [`ADVANCE_CHUNK_WORK`] incident edges each.
fn degree_chunks<T: FrontierItem>(g: &Graph, items: &[T]) -> Vec<std::ops::Range<usize>> {
    let mut ranges = Vec::new();
    let mut start = 0;
    let mut work = 0u64;
    for (i, item) in items.iter().enumerate() {
        work += g.degree(item.vertex()) as u64 + 1;
        if work >= ADVANCE_CHUNK_WORK {
            ranges.push(start..i + 1);
            start = i + 1;
            work = 0;
        }
    }
    if start < items.len() {
        ranges.push(start..items.len());
    }
    ranges
}

/// Visits every incident edge of every frontier item exactly once and keeps
/// the outputs the functor produces, in frontier order then adjacency order.
pub fn advance<T, U, F>(exec: &Executor, g: &Graph, frontier: &Frontier<T>, functor: F) -> Frontier<U>
where
    T: FrontierItem,
    U: Copy + Send + Sync + Default,
    F: Fn(&T, VertexId) -> Option<U> + Sync,
{
    let items = frontier.items();
    if items.is_empty() {
        return Frontier::default();
    }
    exec.install(|| {
        let parts: Vec<Vec<U>> = degree_chunks(g, items)
            .into_par_iter()
            .map(|range| {
                let mut out = Vec::new();
                for item in &items[range] {
                    for &dst in g.neighbors(item.vertex()) {
                        if let Some(u) = functor(item, dst) {
                            out.push(u);
                        }
                    }
                }
                out
            })
            .collect();
        Frontier::new(compact(parts))
    })
}

/// Keeps items satisfying `predicate`, preserving relative order.
pub fn filter<T, P>(exec: &Executor, frontier: &Frontier<T>, predicate: P) -> Frontier<T>
where
    T: Copy + Send + Sync + Default,
    P: Fn(&T) -> bool + Sync,
{
    exec.install(|| {
        let parts: Vec<Vec<T>> = frontier
            .items()
            .par_chunks(ITEM_CHUNK)
            .map(|chunk| chunk.iter().copied().filter(|x| predicate(x)).collect())
            .collect();
        Frontier::new(compact(parts))
    })
}

/// Applies `op` to every item once; the outputs line up with the input.
pub fn compute<T, R, F>(exec: &Executor, frontier: &Frontier<T>, op: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    exec.install(|| frontier.items().par_iter().map(op).collect())
}

/// Which common neighbors a segmented intersection reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntersectRange {
    All,
    /// Only `w > max(src, dst)`.
    AboveBoth,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntersectResult {
    pub counts: Vec<u64>,
    /// Common vertices per pair, when requested.
    pub listings: Option<Vec<Vec<VertexId>>>,
}

impl IntersectResult {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// `|N(src) ∩ N(dst)|` for every pair in the frontier.
pub fn segmented_intersect(
    exec: &Executor,
    g: &Graph,
    pairs: &Frontier<EdgeItem>,
    range: IntersectRange,
    keep_listings: bool,
) -> IntersectResult {
    let slices = |p: &EdgeItem| {
        let a = g.neighbors(p.src);
        let b = g.neighbors(p.dst);
        match range {
            IntersectRange::All => (a, b),
            IntersectRange::AboveBoth => {
                let floor = p.src.max(p.dst);
                (&a[a.partition_point(|&x| x <= floor)..], &b[b.partition_point(|&x| x <= floor)..])
            }
        }
    };
    exec.install(|| {
        if keep_listings {
            let (counts, lists): (Vec<u64>, Vec<Vec<VertexId>>) = pairs
                .items()
                .par_iter()
                .with_min_len(ITEM_CHUNK)
                .map(|p| {
                    let (a, b) = slices(p);
                    let mut common = Vec::new();
                    intersect_sorted(a, b, |w| common.push(w));
                    (common.len() as u64, common)
                })
                .unzip();
            IntersectResult {
                counts,
                listings: Some(lists),
            }
        } else {
            let counts = pairs
                .items()
                .par_iter()
                .with_min_len(ITEM_CHUNK)
                .map(|p| {
                    let (a, b) = slices(p);
                    let mut n = 0u64;
                    intersect_sorted(a, b, |_| n += 1);
                    n
                })
                .collect();
            IntersectResult {
                counts,
                listings: None,
            }
        }
    })
}

/// Calls `visit` for each common element of two strictly ascending slices,
/// in ascending order. Merges when lengths are comparable and probes the
/// longer list by binary search otherwise.
pub fn intersect_sorted(a: &[VertexId], b: &[VertexId], mut visit: impl FnMut(VertexId)) {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return;
    }
    if long.len() >= PROBE_RATIO * short.len() {
        let mut rest = long;
        for &x in short {
            match rest.binary_search(&x) {
                Ok(i) => {
                    visit(x);
                    rest = &rest[i + 1..];
                }
                Err(i) => rest = &rest[i..],
            }
            if rest.is_empty() {
                break;
            }
        }
    } else {
        let (mut i, mut j) = (0, 0);
        while i < short.len() && j < long.len() {
            match short[i].cmp(&long[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    visit(short[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use proptest::prelude::*;
    use std::sync::atomic::{AtomicU64, Ordering};

    fn k3() -> Graph {
        generators::complete(3)
    }

    #[test]
    fn advance_accept_all_and_ordered() {
        let exec = Executor::sequential();
        let g = k3();
        let out = advance(&exec, &g, &Frontier::new(vec![0]), |_, d| Some(d));
        assert_eq!(out.items(), &[1, 2]);
        let up = |s: &VertexId, d: VertexId| (d > *s).then_some(d);
        assert_eq!(advance(&exec, &g, &Frontier::new(vec![0]), up).items(), &[1, 2]);
        assert!(advance(&exec, &g, &Frontier::new(vec![2]), up).is_empty());
        let empty: VertexFrontier = Frontier::default();
        assert!(advance(&exec, &g, &empty, |_, d| Some(d)).is_empty());
    }

    #[test]
    fn advance_edge_output_carries_source_and_payload() {
        let exec = Executor::sequential();
        let g = k3();
        let f = Frontier::new(vec![EdgeItem::new(9, 1, 7)]);
        let out: EdgeFrontier = advance(&exec, &g, &f, |it, d| Some(EdgeItem::new(it.dst, d, it.payload)));
        assert_eq!(out.kind(), FrontierKind::Edge);
        assert_eq!(out.items(), &[EdgeItem::new(1, 0, 7), EdgeItem::new(1, 2, 7)]);
    }

    #[test]
    fn filter_cases() {
        let exec = Executor::sequential();
        let f = Frontier::new(vec![0u32, 1, 2, 3, 4]);
        assert_eq!(filter(&exec, &f, |x| x % 2 == 0).items(), &[0, 2, 4]);
        let empty: VertexFrontier = Frontier::default();
        assert!(filter(&exec, &empty, |_| true).is_empty());
        let star = generators::star(4);
        let all = VertexFrontier::all_vertices(&star);
        assert_eq!(filter(&exec, &all, |&v| star.degree(v) >= 2).items(), &[0]);
    }

    #[test]
    fn compute_maps_each_item() {
        let exec = Executor::sequential();
        let g = k3();
        let f = VertexFrontier::all_vertices(&g);
        assert_eq!(compute(&exec, &f, |&v| g.degree(v)), vec![2, 2, 2]);
        assert_eq!(compute(&exec, &f, |&v| v), f.items().to_vec());
    }

    #[test]
    fn intersect_small_cases() {
        let exec = Executor::sequential();
        let k4 = generators::complete(4);
        let pair = Frontier::new(vec![EdgeItem::new(0, 1, 0)]);
        let r = segmented_intersect(&exec, &k4, &pair, IntersectRange::All, true);
        assert_eq!(r.counts, vec![2]);
        assert_eq!(r.listings.unwrap(), vec![vec![2, 3]]);
        let r = segmented_intersect(&exec, &k3(), &pair, IntersectRange::All, true);
        assert_eq!(r.counts, vec![1]);
        assert_eq!(r.listings.unwrap(), vec![vec![2]]);
    }

    #[test]
    fn probing_path_matches_merge() {
        let long: Vec<VertexId> = (0..1000).map(|x| x * 3).collect();
        let short = vec![0, 4, 9, 2997, 3000];
        let mut got = Vec::new();
        intersect_sorted(&short, &long, |w| got.push(w));
        assert_eq!(got, vec![0, 9, 2997]);
    }

    #[test]
    fn work_accounting_counts_every_incident_edge() {
        let g = generators::gnp(300, 0.05, 4);
        let f = VertexFrontier::all_vertices(&g);
        let calls = AtomicU64::new(0);
        let exec = Executor::new(4).unwrap();
        let _ = advance(&exec, &g, &f, |_, d| {
            calls.fetch_add(1, Ordering::Relaxed);
            Some(d)
        });
        assert_eq!(calls.into_inner(), 2 * g.num_edges());
    }

    #[test]
    fn output_is_identical_across_worker_counts() {
        let g = generators::gnp(2000, 0.01, 11);
        let f = VertexFrontier::all_vertices(&g);
        let runs: Vec<_> = [1, 2, 8]
            .iter()
            .map(|&w| {
                let exec = Executor::new(w).unwrap();
                advance(&exec, &g, &f, |s, d| (d > *s).then_some(EdgeItem::new(*s, d, 0)))
            })
            .collect();
        assert_eq!(runs[0], runs[1]);
        assert_eq!(runs[0], runs[2]);
        assert_eq!(runs[0].len() as u64, g.num_edges());
    }

    #[test]
    fn advance_matches_sequential_reference_on_gnp() {
        let exec = Executor::new(2).unwrap();
        let g = generators::gnp(50, 0.2, 5);
        let f = Frontier::new(vec![3, 17, 3, 49, 0]);
        let out = advance(&exec, &g, &f, |_, d| Some(d));
        let mut expected = Vec::new();
        for &u in f.items() {
            let (lo, hi) = (g.row_offsets()[u as usize] as usize, g.row_offsets()[u as usize + 1] as usize);
            expected.extend_from_slice(&g.neighbor_array()[lo..hi]);
        }
        assert_eq!(out.into_items(), expected);
    }

    fn brute_common(g: &Graph, u: VertexId, v: VertexId) -> u64 {
        (0..g.num_vertices() as VertexId)
            .filter(|&w| g.adjacent(u, w) && g.adjacent(v, w))
            .count() as u64
    }

    proptest! {
        #[test]
        fn filter_is_idempotent(items in prop::collection::vec(0u32..1000, 0..3000), m in 1u32..7) {
            let exec = Executor::new(2).unwrap();
            let f = Frontier::new(items);
            let once = filter(&exec, &f, |x| x % m == 0);
            prop_assert_eq!(filter(&exec, &once, |x| x % m == 0), once.clone());
            prop_assert!(once.iter().all(|x| x % m == 0));
        }

        #[test]
        fn intersect_equals_double_loop(n in 2usize..100, p in 0.0f64..0.6, seed in any::<u64>()) {
            let g = generators::gnp(n, p, seed);
            let exec = Executor::sequential();
            let mut pairs = Vec::new();
            for u in 0..n as VertexId {
                for v in 0..n as VertexId {
                    if (u + v) % 3 == 0 {
                        pairs.push(EdgeItem::new(u, v, 0));
                    }
                }
            }
            let r = segmented_intersect(&exec, &g, &Frontier::new(pairs.clone()), IntersectRange::All, false);
            for (p, &c) in pairs.iter().zip(&r.counts) {
                prop_assert_eq!(c, brute_common(&g, p.src, p.dst));
            }
        }
    }
}
