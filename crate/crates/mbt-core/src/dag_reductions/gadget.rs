//! DAG gadget encoding 3-colouring: colourings become trees of size N − n²
//! and large trees decode back into colourings.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::snap;
use crate::graph::{validate_dir_tree, Digraph, DirBinaryTree, TreeError, UGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "R")]
    Red,
    #[serde(rename = "G")]
    Green,
    #[serde(rename = "B")]
    Blue,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Red, Color::Green, Color::Blue];

    pub fn index(self) -> usize {
        self as usize
    }
}

pub type Coloring = Vec<Color>;

/// JSON map form: vertex id → colour.
pub fn coloring_to_map(c: &[Color]) -> BTreeMap<usize, Color> {
    c.iter().copied().enumerate().collect()
}

pub fn coloring_from_map(map: &BTreeMap<usize, Color>, n: usize) -> Option<Coloring> {
    (0..n).map(|v| map.get(&v).copied()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("epsilon must be positive and finite")]
    BadEpsilon,
    #[error("graph needs at least one edge")]
    NoEdges,
    #[error("coloring has {got} entries for {n} vertices")]
    WrongLength { n: usize, got: usize },
    #[error("edge {{{0}, {1}}} is monochromatic")]
    Monochromatic(usize, usize),
    #[error("tree is not rooted at the gadget root")]
    WrongRoot,
    #[error("invalid tree: {0}")]
    InvalidTree(#[from] TreeError),
}

/// Layout (n vertices, m edges, t nodes per edge tree):
/// a = 0; B-heap node h at 1 + h, so v_i = n + i; path node p ∈ 1..=n of
/// colour C at vertex i is 2n + (C·n + i)·n + p − 1; edge-tree node h of
/// (e, C) is 2n + 3n² + (3e + C)·t + h, its root a_e^C at h = 0.
#[derive(Clone, Debug)]
pub struct ColorGadget {
    pub dag: Digraph,
    pub graph: UGraph,
    pub n: usize,
    pub m: usize,
    pub epsilon: f64,
    pub t: usize,
    pub big_n: usize,
    /// Path position used by edge e at each endpoint (1-based).
    pub slots: Vec<(usize, usize)>,
}

impl ColorGadget {
    pub const ROOT: usize = 0;

    pub fn heap_node(&self, h: usize) -> usize {
        1 + h
    }

    pub fn leaf(&self, i: usize) -> usize {
        self.n + i
    }

    pub fn path_node(&self, c: Color, i: usize, p: usize) -> usize {
        2 * self.n + (c.index() * self.n + i) * self.n + p - 1
    }

    pub fn edge_tree_node(&self, e: usize, c: Color, h: usize) -> usize {
        2 * self.n + 3 * self.n * self.n + (3 * e + c.index()) * self.t + h
    }

    pub fn edge_root(&self, e: usize, c: Color) -> usize {
        self.edge_tree_node(e, c, 0)
    }

    /// Target size N − n² of a tree built from a proper colouring.
    pub fn target_size(&self) -> usize {
        self.big_n - self.n * self.n
    }
}

/// t = ⌈(2εn(n+1) + 4n²)/(εm)⌉.
pub fn gadget_t(n: usize, m: usize, eps: f64) -> usize {
    let (n, m) = (n as f64, m as f64);
    snap((2.0 * eps * n * (n + 1.0) + 4.0 * n * n) / (eps * m)).ceil() as usize
}

pub fn build_color_gadget(g: &UGraph, eps: f64) -> Result<ColorGadget, GadgetError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(GadgetError::BadEpsilon);
    }
    if g.m() == 0 {
        return Err(GadgetError::NoEdges);
    }
    let (n, m) = (g.n(), g.m());
    let t = gadget_t(n, m, eps);
    let big_n = 3 * m * t + 3 * n * n + 2 * n;
    let mut rank = vec![0usize; n];
    let slots: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            rank[u] += 1;
            rank[v] += 1;
            (rank[u], rank[v])
        })
        .collect();
    let mut gad = ColorGadget { dag: Digraph::empty(0), graph: g.clone(), n, m, epsilon: eps, t, big_n, slots };

    let mut arcs = Vec::new();
    arcs.push((gad.heap_node(0), ColorGadget::ROOT));
    for h in 1..2 * n - 1 {
        arcs.push((gad.heap_node(h), gad.heap_node((h - 1) / 2)));
    }
    for c in Color::ALL {
        for i in 0..n {
            arcs.push((gad.path_node(c, i, 1), gad.leaf(i)));
            for p in 1..n {
                arcs.push((gad.path_node(c, i, p + 1), gad.path_node(c, i, p)));
            }
        }
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let (pu, pv) = gad.slots[e];
        for c in Color::ALL {
            for h in 1..t {
                arcs.push((gad.edge_tree_node(e, c, h), gad.edge_tree_node(e, c, (h - 1) / 2)));
            }
            arcs.push((gad.edge_root(e, c), gad.path_node(c, u, pu)));
            arcs.push((gad.edge_root(e, c), gad.path_node(c, v, pv)));
        }
    }
    gad.dag = Digraph::new(big_n, arcs).expect("gadget is simple by construction");
    Ok(gad)
}

/// Drops, at every vertex, the path of its own colour; every edge tree hangs
/// off the first endpoint whose path survives.
pub fn coloring_to_tree(gad: &ColorGadget, sigma: &[Color]) -> Result<DirBinaryTree, GadgetError> {
    if sigma.len() != gad.n {
        return Err(GadgetError::WrongLength { n: gad.n, got: sigma.len() });
    }
    let n = gad.n;
    let mut arcs = vec![(gad.heap_node(0), ColorGadget::ROOT)];
    for h in 1..2 * n - 1 {
        arcs.push((gad.heap_node(h), gad.heap_node((h - 1) / 2)));
    }
    for (i, &own) in sigma.iter().enumerate().take(n) {
        for c in Color::ALL.into_iter().filter(|&c| c != own) {
            arcs.push((gad.path_node(c, i, 1), gad.leaf(i)));
            for p in 1..n {
                arcs.push((gad.path_node(c, i, p + 1), gad.path_node(c, i, p)));
            }
        }
    }
    for (e, &(u, v)) in gad.graph.edges().iter().enumerate() {
        if sigma[u] == sigma[v] {
            return Err(GadgetError::Monochromatic(u, v));
        }
        let (pu, pv) = gad.slots[e];
        for c in Color::ALL {
            for h in 1..gad.t {
                arcs.push((gad.edge_tree_node(e, c, h), gad.edge_tree_node(e, c, (h - 1) / 2)));
            }
            let target = if sigma[u] != c { gad.path_node(c, u, pu) } else { gad.path_node(c, v, pv) };
            arcs.push((gad.edge_root(e, c), target));
        }
    }
    Ok(DirBinaryTree { root: ColorGadget::ROOT, arcs })
}

/// Greedily adds arcs (u, v) with u outside, v inside with a free in-slot,
/// scanning in arc-id order until nothing changes.
pub fn maximalize(g: &Digraph, t: &DirBinaryTree) -> DirBinaryTree {
    let mut inside: HashSet<usize> = t.vertices().into_iter().collect();
    let mut indeg: HashMap<usize, usize> = HashMap::new();
    for &(_, v) in &t.arcs {
        *indeg.entry(v).or_default() += 1;
    }
    let mut arcs = t.arcs.clone();
    loop {
        let mut changed = false;
        for &(u, v) in g.arcs() {
            if !inside.contains(&u) && inside.contains(&v) && indeg.get(&v).copied().unwrap_or(0) < 2 {
                inside.insert(u);
                *indeg.entry(v).or_default() += 1;
                arcs.push((u, v));
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    DirBinaryTree { root: t.root, arcs }
}

#[derive(Clone, Debug)]
pub struct ColoringReport {
    pub coloring: Coloring,
    pub violations: usize,
    /// Set when some vertex did not have exactly one missing first-path node.
    pub fallback: bool,
    pub maximal_tree: DirBinaryTree,
}

pub fn tree_to_coloring(gad: &ColorGadget, t: &DirBinaryTree) -> Result<ColoringReport, GadgetError> {
    if t.root != ColorGadget::ROOT {
        return Err(GadgetError::WrongRoot);
    }
    validate_dir_tree(&gad.dag, t)?;
    let full = maximalize(&gad.dag, t);
    let inside: HashSet<usize> = full.vertices().into_iter().collect();
    let mut fallback = false;
    let coloring: Coloring = (0..gad.n)
        .map(|i| {
            let missing: Vec<Color> = Color::ALL.into_iter().filter(|&c| !inside.contains(&gad.path_node(c, i, 1))).collect();
            if missing.len() != 1 {
                fallback = true;
            }
            missing.first().copied().unwrap_or(Color::Red)
        })
        .collect();
    let violations = gad.graph.edges().iter().filter(|&&(u, v)| coloring[u] == coloring[v]).count();
    Ok(ColoringReport { coloring, violations, fallback, maximal_tree: full })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Color::*;

    fn k3() -> UGraph {
        UGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn parameters_match_formulas() {
        let gad = build_color_gadget(&k3(), 1.0).unwrap();
        assert_eq!((gad.t, gad.big_n), (20, 213));
        assert_eq!(gad.dag.n(), 213);
        assert!(gad.dag.is_acyclic());
        let p2 = UGraph::new(2, [(0, 1)]).unwrap();
        let gad = build_color_gadget(&p2, 1.0).unwrap();
        assert_eq!((gad.t, gad.big_n), (28, 100));
        assert!(build_color_gadget(&p2, 0.0).is_err());
        assert!(matches!(build_color_gadget(&UGraph::empty(3), 1.0), Err(GadgetError::NoEdges)));
    }

    #[test]
    fn proper_colorings_give_target_size() {
        let gad = build_color_gadget(&k3(), 1.0).unwrap();
        let t = coloring_to_tree(&gad, &[Red, Green, Blue]).unwrap();
        assert_eq!(t.size(), 204);
        assert!(validate_dir_tree(&gad.dag, &t).is_ok());
        let p2 = UGraph::new(2, [(0, 1)]).unwrap();
        let gad2 = build_color_gadget(&p2, 1.0).unwrap();
        assert_eq!(coloring_to_tree(&gad2, &[Red, Green]).unwrap().size(), 96);
        assert_eq!(coloring_to_tree(&gad, &[Red, Red, Blue]), Err(GadgetError::Monochromatic(0, 1)));
    }

    #[test]
    fn round_trip_recovers_proper_coloring() {
        let gad = build_color_gadget(&k3(), 1.0).unwrap();
        let sigma = vec![Blue, Red, Green];
        let t = coloring_to_tree(&gad, &sigma).unwrap();
        assert_eq!(maximalize(&gad.dag, &t).size(), t.size());
        let rep = tree_to_coloring(&gad, &t).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(!rep.fallback);
        assert_eq!(rep.coloring, sigma);
    }

    #[test]
    fn maximal_trees_fill_every_leaf() {
        let gad = build_color_gadget(&k3(), 1.0).unwrap();
        let rep = tree_to_coloring(&gad, &DirBinaryTree::single(0)).unwrap();
        let kids = rep.maximal_tree.children();
        for i in 0..3 {
            assert_eq!(kids[&gad.leaf(i)].len(), 2);
        }
        assert!(!rep.fallback);
    }

    #[test]
    fn omitting_edge_trees_costs_size() {
        let gad = build_color_gadget(&k3(), 1.0).unwrap();
        let t = coloring_to_tree(&gad, &[Red, Green, Blue]).unwrap();
        // drop ⌈εm⌉ = 3 whole edge trees
        let dropped: HashSet<usize> =
            (0..3).flat_map(|e| (0..gad.t).map(move |h| (e, h))).map(|(e, h)| gad.edge_tree_node(e, Red, h)).collect();
        let arcs: Vec<_> = t.arcs.iter().copied().filter(|(u, _)| !dropped.contains(u)).collect();
        let smaller = DirBinaryTree { root: 0, arcs };
        assert!(validate_dir_tree(&gad.dag, &smaller).is_ok());
        assert!((smaller.size() as f64) < (1.0 - gad.epsilon / 4.0) * gad.target_size() as f64);
    }
}
