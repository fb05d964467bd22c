//! Graph and tree-certificate types, validators, the edge-list text format and
//! seeded instance generators.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Construction errors for graphs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {v} out of range for n = {n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    Duplicate(usize, usize),
    #[error("graph contains a directed cycle")]
    Cyclic,
    #[error("duplicate value at positions {0} and {1}")]
    DuplicateValue(usize, usize),
    #[error("{m} edges requested but at most {max} fit")]
    TooManyEdges { m: usize, max: usize },
}

/// Simple directed graph on vertices `0..n`. Arc ids follow insertion order.
#[derive(Clone, Debug)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    index: HashMap<(usize, usize), usize>,
}

impl Digraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut g = Digraph {
            n,
            arcs: Vec::new(),
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            index: HashMap::new(),
        };
        for (u, v) in arcs {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { v: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.index.contains_key(&(u, v)) {
                return Err(GraphError::Duplicate(u, v));
            }
            g.index.insert((u, v), g.arcs.len());
            g.arcs.push((u, v));
            g.out_adj[u].push(v);
            g.in_adj[v].push(u);
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, []).expect("empty graph is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out_adj[u]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.index.contains_key(&(u, v))
    }

    pub fn arc_id(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&(u, v)).copied()
    }

    /// Kahn order, or `None` when a directed cycle exists.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg: Vec<usize> = (0..self.n).map(|v| self.in_adj[v].len()).collect();
        let mut queue: VecDeque<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &self.out_adj[u] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Vertices with a directed path to `r`, including `r`.
    pub fn reaching(&self, r: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[r] = true;
        let mut stack = vec![r];
        while let Some(v) = stack.pop() {
            for &u in &self.in_adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }

    /// Copy without the arc with id `e`.
    pub fn without_arc(&self, e: usize) -> Digraph {
        Digraph::new(self.n, self.arcs.iter().enumerate().filter(|&(i, _)| i != e).map(|(_, &a)| a))
            .expect("subgraph of a valid graph")
    }

    fn sorted_arcs(&self) -> Vec<(usize, usize)> {
        let mut a = self.arcs.clone();
        a.sort_unstable();
        a
    }
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.sorted_arcs() == other.sorted_arcs()
    }
}
impl Eq for Digraph {}

/// Simple undirected graph; edges are stored as `(min, max)` in insertion order.
#[derive(Clone, Debug)]
pub struct UGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    index: HashMap<(usize, usize), usize>,
}

fn norm(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl UGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut g = UGraph { n, edges: Vec::new(), adj: vec![Vec::new(); n], index: HashMap::new() };
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { v: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let e = norm(u, v);
            if g.index.contains_key(&e) {
                return Err(GraphError::Duplicate(e.0, e.1));
            }
            g.index.insert(e, g.edges.len());
            g.edges.push(e);
            g.adj[u].push(v);
            g.adj[v].push(u);
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, []).expect("empty graph is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.index.contains_key(&norm(u, v))
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&norm(u, v)).copied()
    }

    /// Component label per vertex, labels numbered by smallest member.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Subgraph induced by `vertices`, relabelled `0..k` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> UGraph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| (pos[u], pos[v]));
        UGraph::new(vertices.len(), edges).expect("induced subgraph is simple")
    }

    fn sorted_edges(&self) -> Vec<(usize, usize)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }
}

impl PartialEq for UGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.sorted_edges() == other.sorted_edges()
    }
}
impl Eq for UGraph {}

/// Rooted in-tree certificate: every non-root vertex has one arc towards the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirBinaryTree {
    pub root: usize,
    pub arcs: Vec<(usize, usize)>,
}

impl DirBinaryTree {
    pub fn single(root: usize) -> Self {
        DirBinaryTree { root, arcs: Vec::new() }
    }

    /// Sorted support: the root plus every arc endpoint.
    pub fn vertices(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = std::iter::once(self.root).chain(self.arcs.iter().flat_map(|&(u, v)| [u, v])).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn size(&self) -> usize {
        self.vertices().len()
    }

    /// Parent map over the support.
    pub fn parents(&self) -> HashMap<usize, usize> {
        self.arcs.iter().copied().collect()
    }

    /// Children per vertex, each list sorted.
    pub fn children(&self) -> HashMap<usize, Vec<usize>> {
        let mut ch: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(u, v) in &self.arcs {
            ch.entry(v).or_default().push(u);
        }
        for list in ch.values_mut() {
            list.sort_unstable();
        }
        ch
    }

    pub fn to_json(&self) -> TreeJson {
        let mut edges: Vec<[usize; 2]> = self.arcs.iter().map(|&(u, v)| [u, v]).collect();
        edges.sort_unstable();
        TreeJson { root: Some(self.root), edges, vertices: self.vertices() }
    }
}

/// Undirected tree certificate. The vertex list is explicit so that single
/// vertices and the empty tree are representable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirBinaryTree {
    vertices: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl UndirBinaryTree {
    /// Vertices are sorted and deduplicated; edge endpoints are added to the support.
    pub fn new(vertices: impl IntoIterator<Item = usize>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut es: Vec<(usize, usize)> = edges.into_iter().map(|(u, v)| norm(u, v)).collect();
        es.sort_unstable();
        let mut vs: Vec<usize> = vertices.into_iter().chain(es.iter().flat_map(|&(u, v)| [u, v])).collect();
        vs.sort_unstable();
        vs.dedup();
        UndirBinaryTree { vertices: vs, edges: es }
    }

    pub fn from_edges(edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Self::new([], edges)
    }

    pub fn single(v: usize) -> Self {
        Self::new([v], [])
    }

    pub fn empty() -> Self {
        Self::new([], [])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn degree_map(&self) -> HashMap<usize, usize> {
        let mut d: HashMap<usize, usize> = self.vertices.iter().map(|&v| (v, 0)).collect();
        for &(u, v) in &self.edges {
            *d.get_mut(&u).unwrap() += 1;
            *d.get_mut(&v).unwrap() += 1;
        }
        d
    }

    pub fn adjacency(&self) -> HashMap<usize, Vec<usize>> {
        let mut adj: HashMap<usize, Vec<usize>> = self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for &(u, v) in &self.edges {
            adj.get_mut(&u).unwrap().push(v);
            adj.get_mut(&v).unwrap().push(u);
        }
        for list in adj.values_mut() {
            list.sort_unstable();
        }
        adj
    }

    pub fn to_json(&self, root: Option<usize>) -> TreeJson {
        TreeJson { root, edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(), vertices: self.vertices.clone() }
    }
}

/// JSON form of a certificate. `vertices` is optional on input and only needed
/// for edgeless trees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJson {
    pub root: Option<usize>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub vertices: Vec<usize>,
}

impl TreeJson {
    pub fn to_undirected(&self) -> UndirBinaryTree {
        let extra = self.root.into_iter().chain(self.vertices.iter().copied());
        UndirBinaryTree::new(extra, self.edges.iter().map(|e| (e[0], e[1])))
    }

    /// Directed reading; `None` when the root is missing.
    pub fn to_directed(&self) -> Option<DirBinaryTree> {
        Some(DirBinaryTree { root: self.root?, arcs: self.edges.iter().map(|e| (e[0], e[1])).collect() })
    }
}

/// First violated invariant of a tree certificate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeViolation {
    #[error("({0}, {1}) is not an edge of the host graph")]
    NotInHost(usize, usize),
    #[error("({0}, {1}) occurs twice in the tree")]
    RepeatedEdge(usize, usize),
    #[error("root {0} has an outgoing tree arc")]
    RootHasOutArc(usize),
    #[error("vertex {0} has more than one outgoing tree arc")]
    OutDegree(usize),
    #[error("vertex {v} has in-degree {deg} > 2")]
    InDegree { v: usize, deg: usize },
    #[error("vertex {0} has no path to the root")]
    NoPathToRoot(usize),
    #[error("vertex {v} has degree {deg} above the bound")]
    Degree { v: usize, deg: usize },
    #[error("root {v} has degree {deg} > 2")]
    RootDegree { v: usize, deg: usize },
    #[error("the edge set contains a cycle")]
    Cycle,
    #[error("the tree is disconnected")]
    Disconnected,
    #[error("root {0} is not a tree vertex")]
    RootNotInTree(usize),
}

/// Result of validating a certificate: structural problems are kept apart from
/// invariant failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("structural: vertex {v} out of range for n = {n}")]
    Structural { v: usize, n: usize },
    #[error("invalid tree: {0}")]
    Invalid(TreeViolation),
}

impl From<TreeViolation> for TreeError {
    fn from(v: TreeViolation) -> Self {
        TreeError::Invalid(v)
    }
}

pub fn validate_dir_tree(g: &Digraph, t: &DirBinaryTree) -> Result<(), TreeError> {
    let n = g.n();
    for v in std::iter::once(t.root).chain(t.arcs.iter().flat_map(|&(u, v)| [u, v])) {
        if v >= n {
            return Err(TreeError::Structural { v, n });
        }
    }
    let mut seen = HashSet::new();
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut indeg: HashMap<usize, usize> = HashMap::new();
    for &(u, v) in &t.arcs {
        if !g.has_arc(u, v) {
            return Err(TreeViolation::NotInHost(u, v).into());
        }
        if !seen.insert((u, v)) {
            return Err(TreeViolation::RepeatedEdge(u, v).into());
        }
        if u == t.root {
            return Err(TreeViolation::RootHasOutArc(u).into());
        }
        if parent.insert(u, v).is_some() {
            return Err(TreeViolation::OutDegree(u).into());
        }
        let d = indeg.entry(v).or_insert(0);
        *d += 1;
        if *d > 2 {
            return Err(TreeViolation::InDegree { v, deg: *d }.into());
        }
    }
    // Each vertex must reach the root within |support| parent steps.
    let limit = parent.len() + 1;
    for &start in parent.keys() {
        let mut v = start;
        let mut steps = 0;
        while v != t.root {
            match parent.get(&v) {
                Some(&p) if steps <= limit => {
                    v = p;
                    steps += 1;
                }
                _ => return Err(TreeViolation::NoPathToRoot(start).into()),
            }
        }
    }
    Ok(())
}

/// Undirected check with degree bound 3; a given root must have degree at most 2.
pub fn validate_undir_tree(g: &UGraph, t: &UndirBinaryTree, root: Option<usize>) -> Result<(), TreeError> {
    validate_undir_tree_bounded(g, t, root, 3)
}

pub fn validate_undir_tree_bounded(
    g: &UGraph,
    t: &UndirBinaryTree,
    root: Option<usize>,
    degree_bound: usize,
) -> Result<(), TreeError> {
    let n = g.n();
    for &v in t.vertices().iter().chain(root.iter()) {
        if v >= n {
            return Err(TreeError::Structural { v, n });
        }
    }
    let mut seen = HashSet::new();
    for &(u, v) in t.edges() {
        if !g.has_edge(u, v) {
            return Err(TreeViolation::NotInHost(u, v).into());
        }
        if !seen.insert((u, v)) {
            return Err(TreeViolation::RepeatedEdge(u, v).into());
        }
    }
    let deg = t.degree_map();
    for &v in t.vertices() {
        if deg[&v] > degree_bound {
            return Err(TreeViolation::Degree { v, deg: deg[&v] }.into());
        }
    }
    if let Some(r) = root {
        match deg.get(&r) {
            None => return Err(TreeViolation::RootNotInTree(r).into()),
            Some(&d) if d + 1 > degree_bound => return Err(TreeViolation::RootDegree { v: r, deg: d }.into()),
            _ => {}
        }
    }
    if t.is_empty() {
        return Ok(());
    }
    let mut uf = UnionFind::new(n);
    for &(u, v) in t.edges() {
        if !uf.union(u, v) {
            return Err(TreeViolation::Cycle.into());
        }
    }
    let r0 = uf.find(t.vertices()[0]);
    if t.vertices().iter().any(|&v| uf.find(v) != r0) {
        return Err(TreeViolation::Disconnected.into());
    }
    Ok(())
}

/// Path-compressing union-find.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Counts of tree vertices by degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCensus {
    pub i0: usize,
    pub i1: usize,
    pub i2: usize,
    pub i3: usize,
}

impl DegreeCensus {
    pub fn total(&self) -> usize {
        self.i0 + self.i1 + self.i2 + self.i3
    }

    /// `3 i0 + 2 i1 + i2 = |V| + 2`, valid for every nonempty binary tree.
    pub fn identity_holds(&self) -> bool {
        3 * self.i0 + 2 * self.i1 + self.i2 == self.total() + 2
    }
}

/// Degree census of a tree; rejects anything that is not a nonempty binary tree.
pub fn degree_census(t: &UndirBinaryTree) -> Result<DegreeCensus, TreeError> {
    let n = t.vertices().last().map_or(0, |&v| v + 1);
    let host = UGraph::new(n, t.edges().iter().copied()).map_err(|_| TreeError::Invalid(TreeViolation::Cycle))?;
    validate_undir_tree(&host, t, None)?;
    if t.is_empty() {
        return Err(TreeViolation::Disconnected.into());
    }
    let mut c = DegreeCensus { i0: 0, i1: 0, i2: 0, i3: 0 };
    for (_, d) in t.degree_map() {
        match d {
            0 => c.i0 += 1,
            1 => c.i1 += 1,
            2 => c.i2 += 1,
            _ => c.i3 += 1,
        }
    }
    Ok(c)
}

/// Arc `(i, j)` for `i > j` with `sigma[i] >= sigma[j]`; positions are 0-based.
pub fn permutation_dag<T: Ord>(sigma: &[T]) -> Result<Digraph, GraphError> {
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| sigma[a].cmp(&sigma[b]));
    for w in order.windows(2) {
        if sigma[w[0]] == sigma[w[1]] {
            return Err(GraphError::DuplicateValue(w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    let mut arcs = Vec::new();
    for i in 0..sigma.len() {
        for j in 0..i {
            if sigma[i] >= sigma[j] {
                arcs.push((i, j));
            }
        }
    }
    Digraph::new(sigma.len(), arcs)
}

/// Rooted restriction of a DAG: only vertices reaching `r` keep their arcs and
/// `r` loses its outgoing arcs. Vertex ids are unchanged.
#[derive(Clone, Debug)]
pub struct RootedRestriction {
    pub graph: Digraph,
    pub root: usize,
    /// Sorted vertices that can reach the root.
    pub vertices: Vec<usize>,
}

pub fn rooted_from_unrooted_dag(g: &Digraph, r: usize) -> Result<RootedRestriction, GraphError> {
    if r >= g.n() {
        return Err(GraphError::VertexOutOfRange { v: r, n: g.n() });
    }
    if !g.is_acyclic() {
        return Err(GraphError::Cyclic);
    }
    let reach = g.reaching(r);
    let arcs = g.arcs().iter().copied().filter(|&(u, v)| u != r && reach[u] && reach[v]);
    let graph = Digraph::new(g.n(), arcs)?;
    let vertices = (0..g.n()).filter(|&v| reach[v]).collect();
    Ok(RootedRestriction { graph, root: r, vertices })
}

impl RootedRestriction {
    /// Extends a tree rooted at `t.root` (which must reach `self.root` in `g`)
    /// by a shortest path to `self.root`. On a DAG the path avoids the tree.
    pub fn extend_to_root(&self, g: &Digraph, t: &DirBinaryTree) -> Option<DirBinaryTree> {
        if t.root == self.root {
            return Some(t.clone());
        }
        let mut prev = vec![usize::MAX; g.n()];
        let mut queue = VecDeque::from([t.root]);
        prev[t.root] = t.root;
        while let Some(u) = queue.pop_front() {
            if u == self.root {
                break;
            }
            for &w in g.out_neighbors(u) {
                if prev[w] == usize::MAX {
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if prev[self.root] == usize::MAX {
            return None;
        }
        let mut arcs = t.arcs.clone();
        let mut v = self.root;
        while v != t.root {
            arcs.push((prev[v], v));
            v = prev[v];
        }
        Some(DirBinaryTree { root: self.root, arcs })
    }
}

/// A parsed graph file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Graph {
    Dir(Digraph),
    Undir(UGraph),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn perr(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, msg: msg.into() }
}

/// Reads `mbt <dir|undir> <n> <m>` followed by `m` lines `u v`. Blank lines and
/// lines starting with `#` are skipped.
pub fn read_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
    let tok: Vec<&str> = header.split_whitespace().collect();
    if tok.len() != 4 || tok[0] != "mbt" {
        return Err(perr(hl, "expected header `mbt <dir|undir> <n> <m>`"));
    }
    let directed = match tok[1] {
        "dir" => true,
        "undir" => false,
        other => return Err(perr(hl, format!("unknown kind `{other}`"))),
    };
    let n: usize = tok[2].parse().map_err(|_| perr(hl, "bad vertex count"))?;
    let m: usize = tok[3].parse().map_err(|_| perr(hl, "bad edge count"))?;
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(m);
    for (ln, line) in lines {
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 2 {
            return Err(perr(ln, "expected `u v`"));
        }
        let u: usize = t[0].parse().map_err(|_| perr(ln, "bad vertex id"))?;
        let v: usize = t[1].parse().map_err(|_| perr(ln, "bad vertex id"))?;
        if u >= n || v >= n {
            return Err(perr(ln, format!("vertex out of range (n = {n})")));
        }
        if u == v {
            return Err(perr(ln, "self-loop"));
        }
        let key = if directed { (u, v) } else { norm(u, v) };
        if !seen.insert(key) {
            return Err(perr(ln, "duplicate edge"));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(perr(hl, format!("header announces {m} edges, found {}", edges.len())));
    }
    Ok(if directed {
        Graph::Dir(Digraph::new(n, edges).map_err(|e| perr(hl, e.to_string()))?)
    } else {
        Graph::Undir(UGraph::new(n, edges).map_err(|e| perr(hl, e.to_string()))?)
    })
}

/// Canonical text: header then edges in sorted order.
pub fn write_graph(g: &Graph) -> String {
    let (kind, n, edges) = match g {
        Graph::Dir(d) => ("dir", d.n(), d.sorted_arcs()),
        Graph::Undir(u) => ("undir", u.n(), u.sorted_edges()),
    };
    let mut s = format!("mbt {kind} {n} {}\n", edges.len());
    for (u, v) in edges {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_graph(self))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Dir,
    Dag,
    Undir,
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform simple graph with exactly `m` edges. The DAG kind orients every arc
/// along a random topological order.
pub fn gen_random(kind: GraphKind, n: usize, m: usize, seed: u64) -> Result<Graph, GraphError> {
    let mut rng = rng_from_seed(seed);
    let pairs = n * n.saturating_sub(1);
    let max = if kind == GraphKind::Dir { pairs } else { pairs / 2 };
    if m > max {
        return Err(GraphError::TooManyEdges { m, max });
    }
    let picks = sample(&mut rng, max, m).into_vec();
    match kind {
        GraphKind::Dir => {
            let mut arcs: Vec<(usize, usize)> = picks
                .into_iter()
                .map(|k| {
                    let (u, j) = (k / (n - 1), k % (n - 1));
                    (u, if j >= u { j + 1 } else { j })
                })
                .collect();
            arcs.sort_unstable();
            Digraph::new(n, arcs).map(Graph::Dir)
        }
        GraphKind::Dag | GraphKind::Undir => {
            let mut pairs: Vec<(usize, usize)> = picks.into_iter().map(unrank_pair).collect();
            if kind == GraphKind::Undir {
                pairs.sort_unstable();
                return UGraph::new(n, pairs).map(Graph::Undir);
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            // pair (i, j) with i < j: later position points to earlier position
            let mut arcs: Vec<(usize, usize)> = pairs.into_iter().map(|(i, j)| (order[j], order[i])).collect();
            arcs.sort_unstable();
            Digraph::new(n, arcs).map(Graph::Dir)
        }
    }
}

/// Index `k` of the pair list (0,1),(0,2),(1,2),(0,3),... back to `(i, j)`, `i < j`.
fn unrank_pair(k: usize) -> (usize, usize) {
    let mut j = 1;
    while j * (j + 1) / 2 <= k {
        j += 1;
    }
    (k - j * (j - 1) / 2, j)
}

pub fn gen_digraph(n: usize, m: usize, seed: u64) -> Digraph {
    match gen_random(GraphKind::Dir, n, m, seed) {
        Ok(Graph::Dir(g)) => g,
        other => panic!("generator failure: {other:?}"),
    }
}

pub fn gen_dag(n: usize, m: usize, seed: u64) -> Digraph {
    match gen_random(GraphKind::Dag, n, m, seed) {
        Ok(Graph::Dir(g)) => g,
        other => panic!("generator failure: {other:?}"),
    }
}

pub fn gen_ugraph(n: usize, m: usize, seed: u64) -> UGraph {
    match gen_random(GraphKind::Undir, n, m, seed) {
        Ok(Graph::Undir(g)) => g,
        other => panic!("generator failure: {other:?}"),
    }
}
