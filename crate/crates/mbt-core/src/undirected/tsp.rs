//! TSP with weights 1 and 2 via large binary trees of the weight-1 graph
//! with one pendant per vertex.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::{undir_boost_solve, UndirSolver};
use crate::dag_reductions::ReductionError;
use crate::graph::{UGraph, UndirBinaryTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TspError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("internal error: produced an invalid tour")]
    InvalidTour,
}

/// Complete graph on n vertices; pairs listed in `heavy` weigh 2, all others 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tsp12Instance {
    pub n: usize,
    pub heavy: BTreeSet<(usize, usize)>,
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl Tsp12Instance {
    pub fn new(n: usize, heavy: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Tsp12Instance { n, heavy: heavy.into_iter().map(|(u, v)| key(u, v)).collect() }
    }

    /// All pairs outside `s1` weigh 2.
    pub fn from_light_graph(s1: &UGraph) -> Self {
        let n = s1.n();
        let heavy = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| !s1.has_edge(u, v));
        Tsp12Instance::new(n, heavy)
    }

    pub fn weight(&self, u: usize, v: usize) -> u32 {
        if self.heavy.contains(&key(u, v)) { 2 } else { 1 }
    }

    /// S1, the weight-1 subgraph.
    pub fn light_graph(&self) -> UGraph {
        let n = self.n;
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| !self.heavy.contains(&(u, v)));
        UGraph::new(n, edges).expect("pairs are distinct")
    }

    /// "tsp12 <n>" then "u v w" lines; unlisted pairs weigh 1.
    pub fn parse(text: &str) -> Result<Self, TspError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let err = |line: usize, msg: &str| TspError::Parse { line: line + 1, msg: msg.to_string() };
        let (hl, header) = lines.next().ok_or_else(|| err(0, "missing header"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let n = match parts.as_slice() {
            ["tsp12", n] => n.parse::<usize>().map_err(|_| err(hl, "bad vertex count"))?,
            _ => return Err(err(hl, "expected 'tsp12 <n>'")),
        };
        let mut heavy = BTreeSet::new();
        for (i, line) in lines {
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|x| x.parse::<usize>().map_err(|_| err(i, "expected integers")))
                .collect::<Result<_, _>>()?;
            let [u, v, w] = nums[..] else { return Err(err(i, "expected 'u v w'")) };
            if u >= n || v >= n || u == v {
                return Err(err(i, "vertex out of range or self pair"));
            }
            match w {
                1 => {}
                2 => {
                    heavy.insert(key(u, v));
                }
                _ => return Err(err(i, "weight must be 1 or 2")),
            }
        }
        Ok(Tsp12Instance { n, heavy })
    }

    pub fn write(&self) -> String {
        let mut s = format!("tsp12 {}\n", self.n);
        for &(u, v) in &self.heavy {
            s.push_str(&format!("{u} {v} 2\n"));
        }
        s
    }
}

/// G plus a pendant n + v hanging off every vertex v.
pub fn pendant_augment(g: &UGraph) -> UGraph {
    let n = g.n();
    UGraph::new(2 * n, g.edges().iter().copied().chain((0..n).map(|v| (v, n + v)))).expect("pendants are new vertices")
}

/// Drops the pendant vertices (ids ≥ n).
pub fn restrict_to_base(t: &UndirBinaryTree, n: usize) -> UndirBinaryTree {
    UndirBinaryTree::new(
        t.vertices().iter().copied().filter(|&v| v < n),
        t.edges().iter().copied().filter(|&(u, v)| u < n && v < n),
    )
}

fn path_weight(path: &[usize], w: &dyn Fn(usize, usize) -> u32) -> u32 {
    path.windows(2).map(|p| w(p[0], p[1])).sum()
}

/// Post-order flattening of a binary tree into a path on the same vertices.
/// Each degree-3 vertex adds at most 1 to the weight.
pub fn tree_to_path(t: &UndirBinaryTree, w: &dyn Fn(usize, usize) -> u32) -> (Vec<usize>, u32) {
    if t.is_empty() {
        return (Vec::new(), 0);
    }
    let adj = t.adjacency();
    let deg: HashMap<usize, usize> = adj.iter().map(|(&v, ns)| (v, ns.len())).collect();
    let root = *t.vertices().iter().find(|v| deg.get(v).copied().unwrap_or(0) <= 2).expect("binary trees have a vertex of degree at most 2");

    // iterative post-order: children sorted by id
    let mut order = Vec::new();
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        order.push(v);
        for &c in adj.get(&v).map(|x| x.as_slice()).unwrap_or(&[]) {
            if parent.get(&v) != Some(&c) {
                parent.insert(c, v);
                stack.push(c);
            }
        }
    }
    let mut paths: HashMap<usize, Vec<usize>> = HashMap::new();
    for &v in order.iter().rev() {
        let mut kids: Vec<usize> = adj.get(&v).map(|x| x.iter().copied().filter(|&c| parent.get(&v) != Some(&c)).collect()).unwrap_or_default();
        kids.sort_unstable();
        let path = match (kids.as_slice(), v == root) {
            ([], _) => vec![v],
            ([c], _) => {
                let mut p = paths.remove(c).expect("child done");
                p.push(v);
                p
            }
            ([a, b], false) => {
                let mut p = paths.remove(b).expect("child done");
                p.reverse();
                p.extend(paths.remove(a).expect("child done"));
                p.push(v);
                p
            }
            ([a, b], true) => {
                let mut p = paths.remove(a).expect("child done");
                p.push(v);
                let mut pb = paths.remove(b).expect("child done");
                pb.reverse();
                p.extend(pb);
                p
            }
            _ => unreachable!("root has degree at most 2, others at most 3"),
        };
        paths.insert(v, path);
    }
    let path = paths.remove(&root).expect("root done");
    let weight = path_weight(&path, w);
    (path, weight)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tour {
    /// Visiting order; the cycle closes from the last vertex back to the first.
    pub order: Vec<usize>,
    pub weight: u32,
}

pub fn tour_weight(inst: &Tsp12Instance, order: &[usize]) -> u32 {
    if order.len() < 2 {
        return 0;
    }
    let open: u32 = order.windows(2).map(|p| inst.weight(p[0], p[1])).sum();
    if order.len() == 2 {
        open
    } else {
        open + inst.weight(order[order.len() - 1], order[0])
    }
}

pub fn is_valid_tour(inst: &Tsp12Instance, order: &[usize]) -> bool {
    let mut seen = vec![false; inst.n];
    order.len() == inst.n && order.iter().all(|&v| v < inst.n && !std::mem::replace(&mut seen[v], true))
}

/// Solves MBT on S1 plus pendants (error ε/4), keeps the S1 part, flattens
/// it to a path, appends missing vertices by id and closes the cycle.
pub fn tsp12_tour(inst: &Tsp12Instance, solver: &UndirSolver, alpha: f64, eps: f64) -> Result<Tour, TspError> {
    let n = inst.n;
    let s1 = inst.light_graph();
    let aug = pendant_augment(&s1);
    let tree = if n == 0 { UndirBinaryTree::empty() } else { undir_boost_solve(&aug, solver, alpha, eps / 4.0)?.tree };
    let base = restrict_to_base(&tree, n);
    let (mut order, _) = tree_to_path(&base, &|u, v| inst.weight(u, v));
    let mut present = vec![false; n];
    for &v in &order {
        present[v] = true;
    }
    order.extend((0..n).filter(|&v| !present[v]));
    if !is_valid_tour(inst, &order) {
        return Err(TspError::InvalidTour);
    }
    let weight = tour_weight(inst, &order);
    Ok(Tour { order, weight })
}
