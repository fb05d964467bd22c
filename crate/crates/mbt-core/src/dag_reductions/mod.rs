//! Directed squaring G → G², the booster that turns a tree of size s into one
//! of size s(s+1), the inverse extraction, and the boosting loop.

pub mod gadget;

use thiserror::Error;

use crate::graph::{validate_dir_tree, Digraph, DirBinaryTree, TreeError};

pub const SIZE_GUARD: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("tree must be rooted at {expected}, found {found}")]
    WrongRoot { expected: usize, found: usize },
    #[error("invalid tree: {0}")]
    InvalidTree(#[from] TreeError),
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("solver returned an invalid tree: {0}")]
    SolverFailed(String),
}

/// Where a vertex of G² came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inner {
    Vertex(usize),
    Source,
}

/// G² for host G on N vertices: copy u of G′ (G plus a source with arcs to
/// all vertices) occupies ids u·(N+1) .. u·(N+1)+N, the source last.
#[derive(Clone, Debug)]
pub struct DirSquareMap {
    pub squared: Digraph,
    /// r_r, the root of G².
    pub root: usize,
    pub base_root: usize,
    pub base_n: usize,
}

impl DirSquareMap {
    pub fn id(&self, copy: usize, inner: Inner) -> usize {
        copy * (self.base_n + 1)
            + match inner {
                Inner::Vertex(w) => w,
                Inner::Source => self.base_n,
            }
    }

    pub fn decode(&self, id: usize) -> (usize, Inner) {
        let (copy, w) = (id / (self.base_n + 1), id % (self.base_n + 1));
        (copy, if w == self.base_n { Inner::Source } else { Inner::Vertex(w) })
    }

    /// r_u: the copy of the root inside copy u.
    pub fn copy_root(&self, u: usize) -> usize {
        self.id(u, Inner::Vertex(self.base_root))
    }

    pub fn source(&self, u: usize) -> usize {
        self.id(u, Inner::Source)
    }
}

pub fn dir_square(g: &Digraph, r: usize) -> Result<DirSquareMap, ReductionError> {
    let n = g.n();
    if r >= n {
        return Err(ReductionError::VertexOutOfRange(r));
    }
    let stride = n + 1;
    let mut arcs = Vec::with_capacity(n * (g.m() + n) + g.m());
    for u in 0..n {
        let base = u * stride;
        arcs.extend(g.arcs().iter().map(|&(a, b)| (base + a, base + b)));
        arcs.extend((0..n).map(|w| (base + n, base + w)));
    }
    arcs.extend(g.arcs().iter().map(|&(u, v)| (u * stride + r, v * stride + n)));
    let squared = Digraph::new(n * stride, arcs).expect("squared graph is simple by construction");
    Ok(DirSquareMap { squared, root: r * stride + r, base_root: r, base_n: n })
}

/// Plants t1 plus its source in every copy v ∈ t1 (source below the
/// smallest leaf) and links copies along the arcs of t1.
pub fn dir_boost_tree(sq: &DirSquareMap, g: &Digraph, t1: &DirBinaryTree) -> Result<DirBinaryTree, ReductionError> {
    validate_dir_tree(g, t1)?;
    if t1.root != sq.base_root {
        return Err(ReductionError::WrongRoot { expected: sq.base_root, found: t1.root });
    }
    let verts = t1.vertices();
    let children = t1.children();
    let leaf = *verts.iter().find(|v| !children.contains_key(v)).expect("finite trees have leaves");
    let mut arcs = Vec::with_capacity(verts.len() * (verts.len() + 1));
    for &v in &verts {
        arcs.extend(t1.arcs.iter().map(|&(a, b)| (sq.id(v, Inner::Vertex(a)), sq.id(v, Inner::Vertex(b)))));
        arcs.push((sq.source(v), sq.id(v, Inner::Vertex(leaf))));
    }
    arcs.extend(t1.arcs.iter().map(|&(u, v)| (sq.copy_root(u), sq.source(v))));
    let t2 = DirBinaryTree { root: sq.root, arcs };
    debug_assert!(validate_dir_tree(&sq.squared, &t2).is_ok());
    Ok(t2)
}

/// Projection onto G and restriction to a single copy.
#[derive(Clone, Debug)]
pub struct DirExtraction {
    pub projection: DirBinaryTree,
    pub best_copy: Option<(usize, DirBinaryTree)>,
}

impl DirExtraction {
    pub fn best(self) -> DirBinaryTree {
        match self.best_copy {
            Some((_, t)) if t.size() > self.projection.size() => t,
            _ => self.projection,
        }
    }
}

pub fn dir_extract_parts(sq: &DirSquareMap, t2: &DirBinaryTree) -> Result<DirExtraction, ReductionError> {
    if t2.root != sq.root {
        return Err(ReductionError::WrongRoot { expected: sq.root, found: t2.root });
    }
    validate_dir_tree(&sq.squared, t2)?;
    let r = sq.base_root;
    let mut projection = DirBinaryTree::single(r);
    let mut per_copy: Vec<Vec<(usize, usize)>> = vec![Vec::new(); sq.base_n];
    for &(a, b) in &t2.arcs {
        let ((ca, ia), (cb, ib)) = (sq.decode(a), sq.decode(b));
        if ca == cb {
            if let (Inner::Vertex(x), Inner::Vertex(y)) = (ia, ib) {
                per_copy[ca].push((x, y));
            }
        } else {
            // cross arcs are exactly (r_u, s_v)
            projection.arcs.push((ca, cb));
        }
    }
    projection.arcs.sort_unstable();
    let mut best_copy: Option<(usize, DirBinaryTree)> = None;
    for copy in projection.vertices() {
        let t = DirBinaryTree { root: r, arcs: std::mem::take(&mut per_copy[copy]) };
        if best_copy.as_ref().is_none_or(|(_, b)| t.size() > b.size()) {
            best_copy = Some((copy, t));
        }
    }
    Ok(DirExtraction { projection, best_copy })
}

/// Larger of the projection and the best single-copy tree.
pub fn dir_extract(sq: &DirSquareMap, t2: &DirBinaryTree) -> Result<DirBinaryTree, ReductionError> {
    Ok(dir_extract_parts(sq, t2)?.best())
}

/// Number of squarings for ratio `alpha` and target error `eps`.
pub fn boost_rounds(alpha: f64, eps: f64) -> Result<u32, ReductionError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(ReductionError::BadParameter(format!("alpha = {alpha} not in (0, 1]")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(ReductionError::BadParameter(format!("epsilon = {eps} not in (0, 1)")));
    }
    if alpha == 1.0 {
        return Ok(0);
    }
    let ratio = alpha.log2() / (1.0 - eps).log2();
    let k = 1.0 + snap(ratio.log2()).ceil();
    Ok(k.max(0.0) as u32)
}

/// Rounds values within float noise of an integer onto it.
pub(crate) fn snap(x: f64) -> f64 {
    if (x - x.round()).abs() < 1e-9 {
        x.round()
    } else {
        x
    }
}

#[derive(Clone, Debug)]
pub struct BoostOutcome<T> {
    pub tree: T,
    pub k_requested: u32,
    pub k_used: u32,
}

/// Largest number of rounds ≤ `k` whose graph stays under the size guard.
pub fn affordable_rounds(mut size: usize, k: u32, next: impl Fn(usize, usize) -> Option<(usize, usize)>, edges: usize) -> u32 {
    let mut m = edges;
    for used in 0..k {
        match next(size, m) {
            Some((s, e)) if s <= SIZE_GUARD => {
                size = s;
                m = e;
            }
            _ => return used,
        }
    }
    k
}

fn dir_next(n: usize, m: usize) -> Option<(usize, usize)> {
    let v = n.checked_mul(n + 1)?;
    let e = n.checked_mul(m + n)?.checked_add(m)?;
    Some((v, e))
}

pub type DirSolver<'a> = dyn Fn(&Digraph, usize) -> DirBinaryTree + 'a;

pub fn dir_boost_solve(g: &Digraph, r: usize, solver: &DirSolver, alpha: f64, eps: f64) -> Result<BoostOutcome<DirBinaryTree>, ReductionError> {
    let k = boost_rounds(alpha, eps)?;
    let mut out = dir_boost_solve_rounds(g, r, solver, k)?;
    out.k_requested = k;
    Ok(out)
}

/// Squares up to `k` times (fewer if the guard trips), solves, extracts back down.
pub fn dir_boost_solve_rounds(g: &Digraph, r: usize, solver: &DirSolver, k: u32) -> Result<BoostOutcome<DirBinaryTree>, ReductionError> {
    if r >= g.n() {
        return Err(ReductionError::VertexOutOfRange(r));
    }
    let used = affordable_rounds(g.n(), k, dir_next, g.m());
    let mut maps = Vec::new();
    let mut cur = g.clone();
    let mut root = r;
    for _ in 0..used {
        let sq = dir_square(&cur, root)?;
        cur = sq.squared.clone();
        root = sq.root;
        maps.push(sq);
    }
    let mut t = solver(&cur, root);
    validate_dir_tree(&cur, &t).map_err(|e| ReductionError::SolverFailed(e.to_string()))?;
    if t.root != root {
        return Err(ReductionError::SolverFailed(format!("tree rooted at {} instead of {root}", t.root)));
    }
    for sq in maps.iter().rev() {
        t = dir_extract(sq, &t)?;
    }
    Ok(BoostOutcome { tree: t, k_requested: k, k_used: used })
}
