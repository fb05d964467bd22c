//! Undirected ⊠-squaring: every edge becomes a copy of G joined to both
//! endpoints, and every vertex gets two pendant copies of G.

pub mod tsp;

use std::collections::HashMap;

use crate::dag_reductions::{affordable_rounds, boost_rounds, BoostOutcome, ReductionError};
use crate::graph::{validate_undir_tree, UGraph, UndirBinaryTree, UnionFind};

/// Where a vertex of G^⊠2 came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Original(usize),
    EdgeCopy { edge: usize, inner: usize },
    Pendant { vertex: usize, copy: usize, inner: usize },
}

/// Ids: originals 0..n, then edge copy e at n + e·n, then pendant copy c of
/// v at n + m·n + (2v + c)·n.
#[derive(Clone, Debug)]
pub struct UndirSquareMap {
    pub squared: UGraph,
    pub base: UGraph,
}

impl UndirSquareMap {
    fn n(&self) -> usize {
        self.base.n()
    }

    pub fn edge_copy(&self, e: usize, w: usize) -> usize {
        self.n() + e * self.n() + w
    }

    pub fn pendant_copy(&self, v: usize, c: usize, w: usize) -> usize {
        self.n() + self.base.m() * self.n() + (2 * v + c) * self.n() + w
    }

    pub fn origin(&self, id: usize) -> Origin {
        let n = self.n();
        if id < n {
            return Origin::Original(id);
        }
        let rest = id - n;
        let (block, inner) = (rest / n, rest % n);
        if block < self.base.m() {
            Origin::EdgeCopy { edge: block, inner }
        } else {
            let p = block - self.base.m();
            Origin::Pendant { vertex: p / 2, copy: p % 2, inner }
        }
    }

    /// Copy index (edge copies first, then pendant copies) of a non-original vertex.
    fn block(&self, id: usize) -> Option<usize> {
        (id >= self.n()).then(|| (id - self.n()) / self.n())
    }

    /// Inner vertex of G for a copy vertex.
    fn inner(&self, id: usize) -> usize {
        (id - self.n()) % self.n()
    }
}

pub fn undir_square(g: &UGraph) -> UndirSquareMap {
    let (n, m) = (g.n(), g.m());
    let mut sq = UndirSquareMap { squared: UGraph::empty(0), base: g.clone() };
    let mut edges = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        edges.extend(g.edges().iter().map(|&(a, b)| (sq.edge_copy(e, a), sq.edge_copy(e, b))));
        for w in 0..n {
            edges.push((u, sq.edge_copy(e, w)));
            edges.push((v, sq.edge_copy(e, w)));
        }
    }
    for v in 0..n {
        for c in 0..2 {
            edges.extend(g.edges().iter().map(|&(a, b)| (sq.pendant_copy(v, c, a), sq.pendant_copy(v, c, b))));
            edges.extend((0..n).map(|w| (v, sq.pendant_copy(v, c, w))));
        }
    }
    sq.squared = UGraph::new(n + (m + 2 * n) * n, edges).expect("squared graph is simple by construction");
    sq
}

#[derive(Clone, Debug)]
pub struct UndirBoosted {
    pub tree: UndirBinaryTree,
    /// The input had one vertex, so the 2s² + 2s size does not apply.
    pub degraded: bool,
}

/// Plants t1 in the copy of every tree edge and enough pendant copies to
/// bring each original vertex to degree 3. Attachments use the smallest leaf.
pub fn undir_boost_tree(sq: &UndirSquareMap, t1: &UndirBinaryTree) -> Result<UndirBoosted, ReductionError> {
    validate_undir_tree(&sq.base, t1, None)?;
    if t1.is_empty() {
        return Err(ReductionError::BadParameter("empty tree".into()));
    }
    let deg = t1.degree_map();
    let verts = t1.vertices();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    if verts.len() == 1 {
        let v = verts[0];
        for c in 0..2 {
            edges.push((v, sq.pendant_copy(v, c, v)));
        }
        return Ok(UndirBoosted { tree: UndirBinaryTree::from_edges(edges), degraded: true });
    }
    let leaf = *verts.iter().find(|v| deg[v] == 1).expect("trees with two vertices have leaves");
    for &(u, v) in t1.edges() {
        let e = sq.base.edge_id(u, v).expect("tree edge is a host edge");
        edges.extend(t1.edges().iter().map(|&(a, b)| (sq.edge_copy(e, a), sq.edge_copy(e, b))));
        edges.push((u, sq.edge_copy(e, leaf)));
        edges.push((v, sq.edge_copy(e, leaf)));
    }
    for &v in verts {
        for c in 0..3usize.saturating_sub(deg[&v]) {
            edges.extend(t1.edges().iter().map(|&(a, b)| (sq.pendant_copy(v, c, a), sq.pendant_copy(v, c, b))));
            edges.push((v, sq.pendant_copy(v, c, leaf)));
        }
    }
    Ok(UndirBoosted { tree: UndirBinaryTree::from_edges(edges), degraded: false })
}

/// Tree on V(t2) ∩ V(G): {u, v} is kept when the t2-path from u to v runs
/// through the copy of edge {u, v}.
pub fn undir_project(sq: &UndirSquareMap, t2: &UndirBinaryTree) -> Result<UndirBinaryTree, ReductionError> {
    validate_undir_tree(&sq.squared, t2, None)?;
    let n = sq.n();
    let mut uf = UnionFind::new(sq.squared.n());
    for &(a, b) in t2.edges() {
        if a >= n && b >= n {
            uf.union(a, b);
        }
    }
    // per original vertex: component label of each adjacent edge-copy vertex
    let mut touches: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for &(a, b) in t2.edges() {
        let (orig, other) = if a < n { (a, b) } else { (b, a) };
        if orig < n && other >= n {
            if let Origin::EdgeCopy { edge, .. } = sq.origin(other) {
                touches.entry((edge, orig)).or_default().push(uf.find(other));
            }
        }
    }
    let originals: Vec<usize> = t2.vertices().iter().copied().filter(|&v| v < n).collect();
    let mut edges = Vec::new();
    for (e, &(u, v)) in sq.base.edges().iter().enumerate() {
        if let (Some(cu), Some(cv)) = (touches.get(&(e, u)), touches.get(&(e, v))) {
            if cu.iter().any(|c| cv.contains(c)) {
                edges.push((u, v));
            }
        }
    }
    Ok(UndirBinaryTree::new(originals, edges))
}

#[derive(Clone, Debug)]
pub struct UndirExtraction {
    pub projection: UndirBinaryTree,
    /// Largest tree of t2 − V(G), mapped into G.
    pub best_component: UndirBinaryTree,
    pub forest_count: usize,
}

impl UndirExtraction {
    pub fn best(self) -> UndirBinaryTree {
        if self.best_component.size() > self.projection.size() {
            self.best_component
        } else {
            self.projection
        }
    }
}

pub fn undir_extract_parts(sq: &UndirSquareMap, t2: &UndirBinaryTree) -> Result<UndirExtraction, ReductionError> {
    let projection = undir_project(sq, t2)?;
    let n = sq.n();
    let mut uf = UnionFind::new(sq.squared.n());
    for &(a, b) in t2.edges() {
        if a >= n && b >= n {
            uf.union(a, b);
        }
    }
    type Part = (Vec<usize>, Vec<(usize, usize)>);
    let mut comps: std::collections::BTreeMap<usize, Part> = Default::default();
    for &v in t2.vertices().iter().filter(|&&v| v >= n) {
        comps.entry(uf.find(v)).or_default().0.push(v);
    }
    for &(a, b) in t2.edges().iter().filter(|&&(a, b)| a >= n && b >= n) {
        comps.get_mut(&uf.find(a)).expect("component exists").1.push((a, b));
    }
    let forest_count = comps.len();
    let mut best = UndirBinaryTree::empty();
    for (verts, edges) in comps.into_values() {
        debug_assert!(verts.iter().all(|&v| sq.block(v) == sq.block(verts[0])));
        if verts.len() > best.size() {
            best = UndirBinaryTree::new(
                verts.iter().map(|&v| sq.inner(v)),
                edges.iter().map(|&(a, b)| (sq.inner(a), sq.inner(b))),
            );
        }
    }
    Ok(UndirExtraction { projection, best_component: best, forest_count })
}

pub fn undir_extract(sq: &UndirSquareMap, t2: &UndirBinaryTree) -> Result<UndirBinaryTree, ReductionError> {
    Ok(undir_extract_parts(sq, t2)?.best())
}

fn undir_next(n: usize, m: usize) -> Option<(usize, usize)> {
    let v = n.checked_add(m.checked_add(2 * n)?.checked_mul(n)?)?;
    let e = m.checked_mul(m + 2 * n)?.checked_add((2 * n).checked_mul(m + n)?)?;
    Some((v, e))
}

pub type UndirSolver<'a> = dyn Fn(&UGraph) -> UndirBinaryTree + 'a;

pub fn undir_boost_solve(g: &UGraph, solver: &UndirSolver, alpha: f64, eps: f64) -> Result<BoostOutcome<UndirBinaryTree>, ReductionError> {
    let k = boost_rounds(alpha, eps)?;
    let mut out = undir_boost_solve_rounds(g, solver, k)?;
    out.k_requested = k;
    Ok(out)
}

pub fn undir_boost_solve_rounds(g: &UGraph, solver: &UndirSolver, k: u32) -> Result<BoostOutcome<UndirBinaryTree>, ReductionError> {
    let used = affordable_rounds(g.n(), k, undir_next, g.m());
    let mut maps = Vec::new();
    let mut cur = g.clone();
    for _ in 0..used {
        let sq = undir_square(&cur);
        cur = sq.squared.clone();
        maps.push(sq);
    }
    let mut t = solver(&cur);
    validate_undir_tree(&cur, &t, None).map_err(|e| ReductionError::SolverFailed(e.to_string()))?;
    for sq in maps.iter().rev() {
        t = undir_extract(sq, &t)?;
    }
    Ok(BoostOutcome { tree: t, k_requested: k, k_used: used })
}
