//! Host-side query compilation.
//!
//! A [`QueryPlan`] fixes the order in which query nodes are matched (BFS over
//! a spanning tree), which extra adjacency checks each step performs (non-tree
//! edges), and which id-ordering constraints suppress symmetric duplicates
//! (chains inside each neighborhood equivalence class).

use std::collections::VecDeque;
use std::fmt;

/// Widest query the partial table supports.
pub const MAX_QUERY_NODES: usize = 8;

pub type QueryNode = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("query graph has no nodes")]
    Empty,
    #[error("query graph has {0} nodes; at most {MAX_QUERY_NODES} are supported")]
    TooLarge(usize),
    #[error("query node {node} out of range ({num_nodes} nodes)")]
    NodeOutOfRange { node: usize, num_nodes: usize },
    #[error("query self-loop at node {0}")]
    SelfLoop(usize),
    #[error("query graph is disconnected")]
    Disconnected,
    #[error("cannot parse query `{0}`")]
    Syntax(String),
}

/// Small undirected simple query graph stored as adjacency bitmasks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QueryGraph {
    num_nodes: usize,
    adj: [u8; MAX_QUERY_NODES],
}

impl QueryGraph {
    /// Connectivity is not checked here; planning rejects disconnected queries.
    pub fn new(num_nodes: usize, edges: &[(QueryNode, QueryNode)]) -> Result<Self, QueryError> {
        if num_nodes == 0 {
            return Err(QueryError::Empty);
        }
        if num_nodes > MAX_QUERY_NODES {
            return Err(QueryError::TooLarge(num_nodes));
        }
        let mut adj = [0u8; MAX_QUERY_NODES];
        for &(a, b) in edges {
            for node in [a, b] {
                if node >= num_nodes {
                    return Err(QueryError::NodeOutOfRange { node, num_nodes });
                }
            }
            if a == b {
                return Err(QueryError::SelfLoop(a));
            }
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Ok(Self { num_nodes, adj })
    }

    pub fn triangle() -> Self {
        Self::clique(3)
    }

    pub fn clique(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Self::new(n, &edges).expect("clique size within limits")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|b| (b - 1, b)).collect();
        Self::new(n, &edges).expect("path size within limits")
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|a| (a, (a + 1) % n)).collect();
        Self::new(n, &edges).expect("cycle size within limits")
    }

    /// Center 0, leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|b| (0, b)).collect();
        Self::new(leaves + 1, &edges).expect("star size within limits")
    }

    /// Accepts a built-in name (`triangle`, `edge`, `pathN`, `cycleN`,
    /// `cliqueN`, `starN`) or an inline 0-based edge list such as
    /// `0-1,1-2,2-0`.
    pub fn parse(text: &str) -> Result<Self, QueryError> {
        let text = text.trim();
        let syntax = || QueryError::Syntax(text.to_string());
        let sized = |prefix: &str| -> Option<Result<usize, QueryError>> {
            text.strip_prefix(prefix)
                .map(|rest| rest.parse::<usize>().map_err(|_| syntax()))
        };
        match text {
            "triangle" => return Ok(Self::triangle()),
            "edge" => return Ok(Self::path(2)),
            _ => {}
        }
        let builtins: [(&str, fn(usize) -> Self, usize); 4] = [
            ("path", Self::path, 1),
            ("cycle", Self::cycle, 3),
            ("clique", Self::clique, 1),
            ("star", Self::star, 0),
        ];
        for (prefix, make, min) in builtins {
            if let Some(n) = sized(prefix) {
                let n = n?;
                let nodes = if prefix == "star" { n + 1 } else { n };
                if n < min {
                    return Err(syntax());
                }
                if nodes > MAX_QUERY_NODES {
                    return Err(QueryError::TooLarge(nodes));
                }
                return Ok(make(n));
            }
        }

        let mut edges = Vec::new();
        for part in text.split([',', ';']).map(str::trim).filter(|p| !p.is_empty()) {
            let (a, b) = part.split_once('-').ok_or_else(syntax)?;
            let a: usize = a.trim().parse().map_err(|_| syntax())?;
            let b: usize = b.trim().parse().map_err(|_| syntax())?;
            edges.push((a, b));
        }
        if edges.is_empty() {
            return Err(syntax());
        }
        let n = edges.iter().map(|&(a, b)| a.max(b)).max().unwrap() + 1;
        if n > MAX_QUERY_NODES {
            return Err(QueryError::TooLarge(n));
        }
        Self::new(n, &edges)
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn adjacent(&self, a: QueryNode, b: QueryNode) -> bool {
        self.adj[a] & (1 << b) != 0
    }

    pub fn neighbor_mask(&self, a: QueryNode) -> u8 {
        self.adj[a]
    }

    pub fn neighbors(&self, a: QueryNode) -> impl Iterator<Item = QueryNode> + '_ {
        (0..self.num_nodes).filter(move |&b| self.adjacent(a, b))
    }

    pub fn degree(&self, a: QueryNode) -> usize {
        self.adj[a].count_ones() as usize
    }

    pub fn min_degree(&self) -> usize {
        (0..self.num_nodes).map(|a| self.degree(a)).min().unwrap_or(0)
    }

    /// Each edge once as `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(QueryNode, QueryNode)> {
        (0..self.num_nodes)
            .flat_map(|a| (a + 1..self.num_nodes).filter(move |&b| self.adjacent(a, b)).map(move |b| (a, b)))
            .collect()
    }

    pub fn num_edges(&self) -> usize {
        self.adj[..self.num_nodes].iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }
}

impl fmt::Debug for QueryGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QueryGraph({} nodes, {:?})", self.num_nodes, self.edges())
    }
}

/// BFS visit order over a spanning tree, plus the edges the tree misses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: QueryNode,
    pub visit_order: Vec<QueryNode>,
    /// Indexed by query node; `None` for the root.
    pub tree_parent: Vec<Option<QueryNode>>,
    /// Indexed by level: earlier-visited nodes the node at that level must
    /// also be adjacent to, besides its tree parent.
    pub nontree_edges: Vec<Vec<QueryNode>>,
}

impl SpanningTree {
    pub fn tree_edges(&self) -> Vec<(QueryNode, QueryNode)> {
        self.visit_order
            .iter()
            .filter_map(|&n| self.tree_parent[n].map(|p| (p, n)))
            .collect()
    }

    pub fn nontree_edge_list(&self) -> Vec<(QueryNode, QueryNode)> {
        self.visit_order
            .iter()
            .zip(&self.nontree_edges)
            .flat_map(|(&n, earlier)| earlier.iter().map(move |&e| (e, n)))
            .collect()
    }
}

/// BFS from `root`, visiting children in ascending node id.
pub fn build_spanning_tree(q: &QueryGraph, root: QueryNode) -> Result<SpanningTree, QueryError> {
    let n = q.num_nodes();
    if root >= n {
        return Err(QueryError::NodeOutOfRange { node: root, num_nodes: n });
    }
    let mut tree_parent = vec![None; n];
    let mut seen = 1u8 << root;
    let mut visit_order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([root]);
    while let Some(a) = queue.pop_front() {
        visit_order.push(a);
        for b in q.neighbors(a) {
            if seen & (1 << b) == 0 {
                seen |= 1 << b;
                tree_parent[b] = Some(a);
                queue.push_back(b);
            }
        }
    }
    if visit_order.len() != n {
        return Err(QueryError::Disconnected);
    }
    let nontree_edges = visit_order
        .iter()
        .enumerate()
        .map(|(level, &node)| {
            visit_order[..level]
                .iter()
                .copied()
                .filter(|&e| q.adjacent(node, e) && tree_parent[node] != Some(e))
                .collect()
        })
        .collect();
    Ok(SpanningTree {
        root,
        visit_order,
        tree_parent,
        nontree_edges,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NecFlavor {
    /// Members are pairwise non-adjacent with identical neighborhoods.
    /// Singleton classes are reported with this flavor.
    SharedNeighborhood,
    /// Members are mutually adjacent with identical closed neighborhoods.
    MutuallyAdjacentClique,
}

/// Query nodes that can be permuted among themselves in any embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NecClass {
    pub members: Vec<QueryNode>,
    pub flavor: NecFlavor,
}

/// Partitions the query into neighborhood equivalence classes:
/// `a ≃ b` iff `N(a) \ {b} == N(b) \ {a}`.
///
/// For unlabeled graphs this relation is transitive, and a class never mixes
/// adjacent and non-adjacent pairs. Classes are ordered by smallest member.
pub fn compute_nec(q: &QueryGraph) -> Vec<NecClass> {
    let n = q.num_nodes();
    let mut class_of: Vec<Option<usize>> = vec![None; n];
    let mut classes: Vec<NecClass> = Vec::new();
    for a in 0..n {
        if class_of[a].is_some() {
            continue;
        }
        let idx = classes.len();
        class_of[a] = Some(idx);
        let mut members = vec![a];
        for b in a + 1..n {
            if class_of[b].is_none() && equivalent(q, a, b) {
                class_of[b] = Some(idx);
                members.push(b);
            }
        }
        let flavor = if members.len() > 1 && q.adjacent(members[0], members[1]) {
            NecFlavor::MutuallyAdjacentClique
        } else {
            NecFlavor::SharedNeighborhood
        };
        classes.push(NecClass { members, flavor });
    }
    classes
}

fn equivalent(q: &QueryGraph, a: QueryNode, b: QueryNode) -> bool {
    let na = q.neighbor_mask(a) & !(1 << b);
    let nb = q.neighbor_mask(b) & !(1 << a);
    na == nb
}

/// The data vertex matched to `smaller` must have a smaller id than the one
/// matched to `larger`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UmoConstraint {
    pub smaller: QueryNode,
    pub larger: QueryNode,
}

/// Chains the members of each class in visit order. No constraints cross
/// class boundaries.
pub fn generate_umo(classes: &[NecClass], visit_order: &[QueryNode]) -> Vec<UmoConstraint> {
    let position = |node: QueryNode| visit_order.iter().position(|&x| x == node).expect("node in visit order");
    let mut out = Vec::new();
    for class in classes {
        let mut members = class.members.clone();
        members.sort_by_key(|&m| position(m));
        out.extend(members.windows(2).map(|w| UmoConstraint {
            smaller: w[0],
            larger: w[1],
        }));
    }
    out
}

/// One matching step: which query node is bound and what it must satisfy,
/// with every reference expressed as an earlier level index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanLevel {
    pub node: QueryNode,
    pub parent: Option<usize>,
    pub nontree: Vec<usize>,
    /// Levels whose data vertex must be smaller than this level's.
    pub lower_bounds: Vec<usize>,
    pub query_degree: usize,
    /// Query neighbors bound at earlier levels.
    pub earlier_neighbors: usize,
}

impl PlanLevel {
    /// Query neighbors still unbound once this level is filled.
    pub fn later_neighbors(&self) -> usize {
        self.query_degree - self.earlier_neighbors
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryPlan {
    query: QueryGraph,
    tree: SpanningTree,
    nec_classes: Vec<NecClass>,
    umo: Vec<UmoConstraint>,
    levels: Vec<PlanLevel>,
}

/// Root is the highest-degree node, ties to the smallest id.
pub fn choose_root(q: &QueryGraph) -> QueryNode {
    (0..q.num_nodes())
        .max_by_key(|&a| (q.degree(a), std::cmp::Reverse(a)))
        .expect("non-empty query")
}

pub fn compile_plan(q: &QueryGraph) -> Result<QueryPlan, QueryError> {
    let tree = build_spanning_tree(q, choose_root(q))?;
    let nec_classes = compute_nec(q);
    let umo = generate_umo(&nec_classes, &tree.visit_order);

    let level_of = |node: QueryNode| tree.visit_order.iter().position(|&x| x == node).unwrap();
    let levels = tree
        .visit_order
        .iter()
        .enumerate()
        .map(|(level, &node)| {
            let parent = tree.tree_parent[node].map(level_of);
            let nontree: Vec<usize> = tree.nontree_edges[level].iter().map(|&e| level_of(e)).collect();
            let lower_bounds = umo
                .iter()
                .filter(|c| c.larger == node)
                .map(|c| level_of(c.smaller))
                .collect();
            PlanLevel {
                node,
                parent,
                earlier_neighbors: parent.is_some() as usize + nontree.len(),
                nontree,
                lower_bounds,
                query_degree: q.degree(node),
            }
        })
        .collect();

    Ok(QueryPlan {
        query: q.clone(),
        tree,
        nec_classes,
        umo,
        levels,
    })
}

impl QueryPlan {
    pub fn triangle() -> Self {
        compile_plan(&QueryGraph::triangle()).expect("triangle plan")
    }

    pub fn query(&self) -> &QueryGraph {
        &self.query
    }

    pub fn width(&self) -> usize {
        self.query.num_nodes()
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    pub fn visit_order(&self) -> &[QueryNode] {
        &self.tree.visit_order
    }

    pub fn nec_classes(&self) -> &[NecClass] {
        &self.nec_classes
    }

    pub fn umo_constraints(&self) -> &[UmoConstraint] {
        &self.umo
    }

    pub fn levels(&self) -> &[PlanLevel] {
        &self.levels
    }

    /// Candidate threshold for data vertices.
    pub fn min_degree(&self) -> usize {
        self.query.min_degree()
    }

    /// Embeddings represented by each match: the product of `|class|!`.
    pub fn symmetry_factor(&self) -> u64 {
        self.nec_classes
            .iter()
            .map(|c| (1..=c.members.len() as u64).product::<u64>())
            .product()
    }

    pub fn is_triangle(&self) -> bool {
        self.query.num_nodes() == 3 && self.query.num_edges() == 3
    }
}
