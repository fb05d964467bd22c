//! Exponential-time exact solvers. They are the ground truth for every other
//! solver, so they favour obviously-correct search over speed.

use thiserror::Error;

use crate::graph::{Digraph, DirBinaryTree, UGraph, UndirBinaryTree, UnionFind};

pub const UNDIRECTED_CAP: usize = 16;
pub const DAG_CAP: usize = 20;
pub const DIRECTED_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {n} vertices, oracle cap is {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("graph contains a directed cycle")]
    Cyclic,
    #[error("root {0} is not in the vertex set")]
    RootNotInSet(usize),
}

/// Optimum size (vertex count) and a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptResult<T> {
    pub size: usize,
    pub tree: T,
}

fn check_cap(n: usize, cap: usize) -> Result<(), OracleError> {
    if n > cap || n > 63 {
        return Err(OracleError::TooLarge { n, cap: cap.min(63) });
    }
    Ok(())
}

/// Visits every `k`-subset of `items` in lexicographic order until `f` returns true.
fn for_each_combination(items: &[usize], k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if k > items.len() {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf = vec![0; k];
    loop {
        for (b, &i) in buf.iter_mut().zip(&idx) {
            *b = items[i];
        }
        if f(&buf) {
            return true;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] != i + items.len() - k {
                break;
            }
            if i == 0 {
                return false;
            }
        }
        if idx[i] == i + items.len() - k {
            return false;
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn mask_of(vs: &[usize]) -> u64 {
    vs.iter().fold(0, |m, &v| m | 1 << v)
}

/// Maximum binary tree (max degree `degree_bound`) with the default cap.
pub fn brute_mbt_undirected(g: &UGraph, degree_bound: usize) -> Result<OptResult<UndirBinaryTree>, OracleError> {
    brute_mbt_undirected_with_cap(g, degree_bound, UNDIRECTED_CAP)
}

pub fn brute_mbt_undirected_with_cap(
    g: &UGraph,
    degree_bound: usize,
    cap: usize,
) -> Result<OptResult<UndirBinaryTree>, OracleError> {
    undirected_search(g, degree_bound, None, cap)
}

/// Rooted variant: the tree contains `root` and `root` has degree below `degree_bound`.
pub fn brute_mbt_undirected_rooted(
    g: &UGraph,
    root: usize,
    degree_bound: usize,
) -> Result<OptResult<UndirBinaryTree>, OracleError> {
    if root >= g.n() {
        return Err(OracleError::VertexOutOfRange(root));
    }
    undirected_search(g, degree_bound, Some(root), UNDIRECTED_CAP)
}

fn undirected_search(
    g: &UGraph,
    degree_bound: usize,
    root: Option<usize>,
    cap: usize,
) -> Result<OptResult<UndirBinaryTree>, OracleError> {
    let n = g.n();
    check_cap(n, cap)?;
    if n == 0 {
        return Ok(OptResult { size: 0, tree: UndirBinaryTree::empty() });
    }
    let pool: Vec<usize> = (0..n).filter(|&v| Some(v) != root).collect();
    let fixed = root.map_or(0, |_| 1);
    for k in (1..=n).rev() {
        let mut found = None;
        for_each_combination(&pool, k - fixed, |combo| {
            let mut set: Vec<usize> = combo.to_vec();
            if let Some(r) = root {
                set.push(r);
                set.sort_unstable();
            }
            if let Some(edges) = spanning_bounded_tree(g, &set, degree_bound, root) {
                found = Some(UndirBinaryTree::new(set, edges));
                return true;
            }
            false
        });
        if let Some(tree) = found {
            return Ok(OptResult { size: k, tree });
        }
    }
    unreachable!("a single vertex is always a tree")
}

/// Lexicographically smallest spanning tree of `g[set]` with degrees at most
/// `bound` (the root, if any, at most `bound - 1`).
pub fn spanning_bounded_tree(
    g: &UGraph,
    set: &[usize],
    bound: usize,
    root: Option<usize>,
) -> Option<Vec<(usize, usize)>> {
    let mask = mask_of(set);
    if set.len() == 1 {
        return Some(Vec::new());
    }
    let mut edges: Vec<(usize, usize)> =
        g.edges().iter().copied().filter(|&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1).collect();
    edges.sort_unstable();
    if edges.len() + 1 < set.len() {
        return None;
    }
    let mut cap = vec![0usize; g.n()];
    for &v in set {
        cap[v] = if Some(v) == root { bound.saturating_sub(1) } else { bound };
    }
    let mut search = TreeSearch { edges: &edges, set, cap, deg: vec![0; g.n()], chosen: Vec::new() };
    if !search.connectable(0, &UnionFind::new(g.n())) {
        return None;
    }
    search.run(0, UnionFind::new(g.n())).then_some(search.chosen)
}

struct TreeSearch<'a> {
    edges: &'a [(usize, usize)],
    set: &'a [usize],
    cap: Vec<usize>,
    deg: Vec<usize>,
    chosen: Vec<(usize, usize)>,
}

impl TreeSearch<'_> {
    /// Whether chosen edges plus still-usable edges from `from` can connect the set.
    fn connectable(&self, from: usize, uf: &UnionFind) -> bool {
        let mut uf = uf.clone();
        for &(u, v) in &self.edges[from..] {
            if self.deg[u] < self.cap[u] && self.deg[v] < self.cap[v] {
                uf.union(u, v);
            }
        }
        let r = uf.find(self.set[0]);
        self.set.iter().all(|&v| uf.find(v) == r)
    }

    fn run(&mut self, i: usize, uf: UnionFind) -> bool {
        if self.chosen.len() + 1 == self.set.len() {
            return true;
        }
        if i == self.edges.len() || self.edges.len() - i + self.chosen.len() + 1 < self.set.len() {
            return false;
        }
        let (u, v) = self.edges[i];
        let mut with = uf.clone();
        if self.deg[u] < self.cap[u] && self.deg[v] < self.cap[v] && with.union(u, v) {
            self.deg[u] += 1;
            self.deg[v] += 1;
            self.chosen.push((u, v));
            if self.connectable(i + 1, &with) && self.run(i + 1, with) {
                return true;
            }
            self.chosen.pop();
            self.deg[u] -= 1;
            self.deg[v] -= 1;
        }
        self.connectable(i + 1, &uf) && self.run(i + 1, uf)
    }
}

/// Whether an `r`-rooted binary tree of the DAG spans exactly `s`. The witness
/// picks, vertex by vertex in increasing order, the smallest feasible parent.
pub fn dag_subset_feasible(g: &Digraph, s: &[usize], r: usize) -> Result<Option<DirBinaryTree>, OracleError> {
    for &v in s.iter().chain([&r]) {
        if v >= g.n() {
            return Err(OracleError::VertexOutOfRange(v));
        }
    }
    if !s.contains(&r) {
        return Err(OracleError::RootNotInSet(r));
    }
    if !g.is_acyclic() {
        return Err(OracleError::Cyclic);
    }
    let mut set: Vec<usize> = s.to_vec();
    set.sort_unstable();
    set.dedup();
    Ok(dag_assignment(g, &set, r, true).map(|arcs| DirBinaryTree { root: r, arcs }))
}

/// Parent assignment with in-capacity 2 via augmenting paths; on a DAG every
/// complete assignment is an `r`-rooted tree.
fn dag_assignment(g: &Digraph, set: &[usize], r: usize, lexmin: bool) -> Option<Vec<(usize, usize)>> {
    let n = g.n();
    let mut in_set = vec![false; n];
    for &v in set {
        in_set[v] = true;
    }
    let left: Vec<usize> = set.iter().copied().filter(|&v| v != r).collect();
    let options: Vec<Vec<usize>> = left
        .iter()
        .map(|&v| {
            let mut o: Vec<usize> = g.out_neighbors(v).iter().copied().filter(|&w| in_set[w]).collect();
            o.sort_unstable();
            o
        })
        .collect();
    if options.iter().any(|o| o.is_empty()) {
        return None;
    }
    let mut m = Matching::new(n, &options);
    if !m.complete(&[]) {
        return None;
    }
    if !lexmin {
        return Some(left.iter().zip(&m.assign).map(|(&v, &p)| (v, p)).collect());
    }
    let mut fixed: Vec<usize> = Vec::with_capacity(left.len());
    for i in 0..left.len() {
        let choice = options[i].iter().copied().find(|&p| {
            let mut trial = fixed.clone();
            trial.push(p);
            Matching::new(n, &options).complete(&trial)
        })?;
        fixed.push(choice);
    }
    Some(left.into_iter().zip(fixed).collect())
}

struct Matching<'a> {
    options: &'a [Vec<usize>],
    assign: Vec<usize>,
    load: Vec<usize>,
}

impl<'a> Matching<'a> {
    fn new(n: usize, options: &'a [Vec<usize>]) -> Self {
        Matching { options, assign: vec![usize::MAX; options.len()], load: vec![0; n] }
    }

    /// Completes the assignment with the first `prefix.len()` choices pinned.
    fn complete(&mut self, prefix: &[usize]) -> bool {
        for (i, &p) in prefix.iter().enumerate() {
            if self.load[p] == 2 {
                return false;
            }
            self.assign[i] = p;
            self.load[p] += 1;
        }
        for i in prefix.len()..self.options.len() {
            let mut seen = vec![false; self.load.len()];
            if !self.augment(i, prefix.len(), &mut seen) {
                return false;
            }
        }
        true
    }

    fn augment(&mut self, i: usize, pinned: usize, seen: &mut [bool]) -> bool {
        for k in 0..self.options[i].len() {
            let w = self.options[i][k];
            if seen[w] {
                continue;
            }
            seen[w] = true;
            if self.load[w] < 2 {
                self.assign[i] = w;
                self.load[w] += 1;
                return true;
            }
            let holders: Vec<usize> = (pinned..self.options.len()).filter(|&j| self.assign[j] == w && j != i).collect();
            for j in holders {
                if self.augment(j, pinned, seen) {
                    self.load[w] -= 1;
                    self.assign[i] = w;
                    self.load[w] += 1;
                    return true;
                }
            }
        }
        false
    }
}

/// Maximum `r`-rooted binary tree of a DAG by subset enumeration.
pub fn brute_mbt_dag(g: &Digraph, r: usize) -> Result<OptResult<DirBinaryTree>, OracleError> {
    brute_mbt_dag_with_cap(g, r, DAG_CAP)
}

pub fn brute_mbt_dag_with_cap(g: &Digraph, r: usize, cap: usize) -> Result<OptResult<DirBinaryTree>, OracleError> {
    if r >= g.n() {
        return Err(OracleError::VertexOutOfRange(r));
    }
    check_cap(g.n(), cap)?;
    if !g.is_acyclic() {
        return Err(OracleError::Cyclic);
    }
    let reach = g.reaching(r);
    let pool: Vec<usize> = (0..g.n()).filter(|&v| v != r && reach[v]).collect();
    for k in (0..=pool.len()).rev() {
        let mut found = None;
        for_each_combination(&pool, k, |combo| {
            let mut set = combo.to_vec();
            set.push(r);
            set.sort_unstable();
            if dag_assignment(g, &set, r, false).is_some() {
                found = dag_assignment(g, &set, r, true);
                return true;
            }
            false
        });
        if let Some(arcs) = found {
            return Ok(OptResult { size: k + 1, tree: DirBinaryTree { root: r, arcs } });
        }
    }
    unreachable!("the root alone is a tree")
}

/// Exact table over vertex subsets: `f[v][M]` holds when some `v`-rooted binary
/// tree spans exactly `M`. Works on arbitrary digraphs.
pub struct SubsetTable {
    n: usize,
    rooted: Vec<Vec<bool>>,
    hang: Vec<Vec<bool>>,
}

impl SubsetTable {
    pub fn build(g: &Digraph, cap: usize) -> Result<Self, OracleError> {
        let n = g.n();
        check_cap(n, cap.min(20))?;
        let full = 1usize << n;
        let mut rooted = vec![vec![false; full]; n];
        // hang[v][A]: A is spanned by a tree whose root is an in-neighbour of v
        let mut hang = vec![vec![false; full]; n];
        for mask in 1..full {
            for v in 0..n {
                if mask >> v & 1 == 0 {
                    continue;
                }
                let rest = mask & !(1 << v);
                let ok = rest == 0 || hang[v][rest] || {
                    // unordered split: the part holding the lowest bit of `rest` is A
                    let low = rest & rest.wrapping_neg();
                    let mut a = rest;
                    let mut hit = false;
                    while a != 0 {
                        if a & low != 0 && a != rest && hang[v][a] && hang[v][rest & !a] {
                            hit = true;
                            break;
                        }
                        a = (a - 1) & rest;
                    }
                    hit
                };
                rooted[v][mask] = ok;
            }
            for (v, row) in hang.iter_mut().enumerate() {
                if mask >> v & 1 == 1 {
                    continue;
                }
                row[mask] = g.in_neighbors(v).iter().any(|&u| mask >> u & 1 == 1 && rooted[u][mask]);
            }
        }
        Ok(SubsetTable { n, rooted, hang })
    }

    pub fn is_tree(&self, v: usize, mask: usize) -> bool {
        self.rooted[v][mask]
    }

    /// Largest `|M|` with a `v`-rooted tree; ties broken by lexicographically smallest vertex list.
    pub fn best_for_root(&self, v: usize) -> usize {
        let mut best = 0usize;
        let mut best_size = 0;
        for mask in 0..1usize << self.n {
            if self.rooted[v][mask] {
                let size = mask.count_ones() as usize;
                if size > best_size || (size == best_size && lex_less(mask, best)) {
                    best = mask;
                    best_size = size;
                }
            }
        }
        best
    }

    /// Deterministic witness for a feasible `(v, mask)`.
    pub fn witness(&self, g: &Digraph, v: usize, mask: usize) -> Vec<(usize, usize)> {
        debug_assert!(self.rooted[v][mask]);
        let mut arcs = Vec::new();
        self.rebuild(g, v, mask, &mut arcs);
        arcs.sort_unstable();
        arcs
    }

    fn rebuild(&self, g: &Digraph, v: usize, mask: usize, arcs: &mut Vec<(usize, usize)>) {
        let rest = mask & !(1 << v);
        if rest == 0 {
            return;
        }
        if self.hang[v][rest] {
            self.attach(g, v, rest, arcs);
            return;
        }
        let low = rest & rest.wrapping_neg();
        let mut a = rest;
        while a != 0 {
            if a & low != 0 && a != rest && self.hang[v][a] && self.hang[v][rest & !a] {
                self.attach(g, v, a, arcs);
                self.attach(g, v, rest & !a, arcs);
                return;
            }
            a = (a - 1) & rest;
        }
        unreachable!("infeasible entry in witness reconstruction");
    }

    fn attach(&self, g: &Digraph, v: usize, part: usize, arcs: &mut Vec<(usize, usize)>) {
        let mut ins: Vec<usize> = g.in_neighbors(v).to_vec();
        ins.sort_unstable();
        let u = ins.into_iter().find(|&u| part >> u & 1 == 1 && self.rooted[u][part]).expect("hang entry has a root");
        arcs.push((u, v));
        self.rebuild(g, u, part, arcs);
    }
}

/// `a` before `b` when the sorted vertex list of `a` is lexicographically smaller.
fn lex_less(a: usize, b: usize) -> bool {
    if b == 0 {
        return true;
    }
    let diff = a ^ b;
    let low = diff & diff.wrapping_neg();
    a & low != 0
}

/// Maximum `r`-rooted binary tree of an arbitrary digraph.
pub fn brute_mbt_directed(g: &Digraph, r: usize) -> Result<OptResult<DirBinaryTree>, OracleError> {
    brute_mbt_directed_with_cap(g, r, DIRECTED_CAP)
}

pub fn brute_mbt_directed_with_cap(g: &Digraph, r: usize, cap: usize) -> Result<OptResult<DirBinaryTree>, OracleError> {
    if r >= g.n() {
        return Err(OracleError::VertexOutOfRange(r));
    }
    check_cap(g.n(), cap)?;
    let table = SubsetTable::build(g, cap)?;
    let mask = table.best_for_root(r);
    Ok(OptResult { size: mask.count_ones() as usize, tree: DirBinaryTree { root: r, arcs: table.witness(g, r, mask) } })
}

/// Largest binary tree over all roots (unrooted directed MBT).
pub fn brute_mbt_directed_any_root(g: &Digraph) -> Result<OptResult<DirBinaryTree>, OracleError> {
    check_cap(g.n(), DIRECTED_CAP)?;
    let mut best: Option<OptResult<DirBinaryTree>> = None;
    if g.n() == 0 {
        return Err(OracleError::VertexOutOfRange(0));
    }
    let table = SubsetTable::build(g, DIRECTED_CAP)?;
    for r in 0..g.n() {
        let mask = table.best_for_root(r);
        let size = mask.count_ones() as usize;
        if best.as_ref().is_none_or(|b| size > b.size) {
            best = Some(OptResult { size, tree: DirBinaryTree { root: r, arcs: table.witness(g, r, mask) } });
        }
    }
    Ok(best.expect("n >= 1"))
}

/// Whether some binary tree with exactly `k` vertices exists (any root).
pub fn has_tree_of_size(g: &Digraph, k: usize) -> Result<bool, OracleError> {
    if k == 0 {
        return Ok(true);
    }
    if k > g.n() {
        return Ok(false);
    }
    // Trees shrink one leaf at a time, so a larger optimum implies size k.
    Ok(brute_mbt_directed_any_root(g)?.size >= k)
}
