//! Rooted MBT over an s′-special decomposition. A state (X, 𝒫, D) at a node
//! describes a binary forest of the node's subgraph: X is the forest's trace
//! on the bag, 𝒫 groups X by tree, D fixes degrees. Only reachable states are
//! stored and transitions are pushed from children to parents.

use std::collections::{BTreeSet, HashMap};

use super::{heuristic_td, to_special, validate_td, NiceKind, NiceTD, SpecialTD, TdError, TreeDecomposition};
use crate::graph::{validate_undir_tree, UGraph, UndirBinaryTree, UnionFind};

/// Canonical (X, 𝒫, D): `x` sorted, `part[i]` labels blocks by first
/// occurrence, `deg[i]` is the exact degree of `x[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwState {
    pub x: Vec<usize>,
    pub part: Vec<u8>,
    pub deg: Vec<u8>,
}

impl TwState {
    fn canonical(mut self) -> Self {
        let mut relabel: HashMap<u8, u8> = HashMap::new();
        for p in &mut self.part {
            let next = relabel.len() as u8;
            *p = *relabel.entry(*p).or_insert(next);
        }
        self
    }

    fn pos(&self, v: usize) -> Option<usize> {
        self.x.binary_search(&v).ok()
    }

    fn blocks(&self) -> u8 {
        self.part.iter().copied().max().map_or(0, |m| m + 1)
    }
}

#[derive(Clone, Copy, Debug)]
enum Back {
    Leaf,
    Same(usize),
    Edge(usize),
    Pair(usize, usize),
}

#[derive(Default)]
struct Table {
    states: Vec<TwState>,
    index: HashMap<TwState, usize>,
    value: Vec<usize>,
    back: Vec<Back>,
}

impl Table {
    /// Keeps the first state reaching the maximum, so witnesses are deterministic.
    fn offer(&mut self, st: TwState, value: usize, back: Back) {
        match self.index.get(&st) {
            Some(&i) => {
                if value > self.value[i] {
                    self.value[i] = value;
                    self.back[i] = back;
                }
            }
            None => {
                self.index.insert(st.clone(), self.states.len());
                self.states.push(st);
                self.value.push(value);
                self.back.push(back);
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct TwSolution {
    /// Edge count of the tree.
    pub edges: usize,
    pub tree: UndirBinaryTree,
    /// Largest number of stored states at one node.
    pub max_states: usize,
}

/// (8w+16)^(w+2) with w = bag size − 2; saturates.
pub fn state_bound(bag_size: usize) -> f64 {
    let w = bag_size.saturating_sub(2) as f64;
    (8.0 * w + 16.0).powf(w + 2.0)
}

fn introduce_vertex(child: &Table, v: usize) -> Table {
    let mut t = Table::default();
    for (i, st) in child.states.iter().enumerate() {
        t.offer(st.clone(), child.value[i], Back::Same(i));
        let at = st.x.binary_search(&v).expect_err("introduced vertex is not in the child bag");
        let mut with = st.clone();
        with.x.insert(at, v);
        with.part.insert(at, st.blocks());
        with.deg.insert(at, 0);
        t.offer(with.canonical(), child.value[i], Back::Same(i));
    }
    t
}

fn introduce_edge(child: &Table, u: usize, v: usize) -> Table {
    let mut t = Table::default();
    for (i, st) in child.states.iter().enumerate() {
        t.offer(st.clone(), child.value[i], Back::Same(i));
        let (Some(a), Some(b)) = (st.pos(u), st.pos(v)) else { continue };
        if st.part[a] == st.part[b] || st.deg[a] >= 3 || st.deg[b] >= 3 {
            continue;
        }
        let mut merged = st.clone();
        let (keep, gone) = (st.part[a], st.part[b]);
        for p in &mut merged.part {
            if *p == gone {
                *p = keep;
            }
        }
        merged.deg[a] += 1;
        merged.deg[b] += 1;
        t.offer(merged.canonical(), child.value[i] + 1, Back::Edge(i));
    }
    t
}

fn drop_vertex(child: &Table, v: usize) -> Table {
    let mut t = Table::default();
    for (i, st) in child.states.iter().enumerate() {
        let Some(a) = st.pos(v) else {
            t.offer(st.clone(), child.value[i], Back::Same(i));
            continue;
        };
        // v must stay attached to a tree that still meets the bag
        let shared = st.part.iter().filter(|&&p| p == st.part[a]).count() > 1;
        if st.deg[a] >= 1 && shared {
            let mut out = st.clone();
            out.x.remove(a);
            out.part.remove(a);
            out.deg.remove(a);
            t.offer(out.canonical(), child.value[i], Back::Same(i));
        }
    }
    t
}

/// Merges child states whose auxiliary graph H(𝒫^j, 𝒫^k) is a forest.
fn join(left: &Table, right: &Table) -> Table {
    let mut by_x: HashMap<&[usize], Vec<usize>> = HashMap::new();
    for (i, st) in right.states.iter().enumerate() {
        by_x.entry(st.x.as_slice()).or_default().push(i);
    }
    let mut t = Table::default();
    for (i, a) in left.states.iter().enumerate() {
        let Some(partners) = by_x.get(a.x.as_slice()) else { continue };
        let len = a.x.len();
        let la = a.blocks() as usize;
        'pair: for &j in partners {
            let b = &right.states[j];
            let mut deg = Vec::with_capacity(len);
            for p in 0..len {
                let d = a.deg[p] + b.deg[p];
                if d > 3 {
                    continue 'pair;
                }
                deg.push(d);
            }
            // nodes: X, then blocks of a, then blocks of b
            let mut uf = UnionFind::new(len + la + b.blocks() as usize);
            for p in 0..len {
                if !uf.union(p, len + a.part[p] as usize) || !uf.union(p, len + la + b.part[p] as usize) {
                    continue 'pair;
                }
            }
            let part = (0..len).map(|p| uf.find(p) as u8).collect();
            let st = TwState { x: a.x.clone(), part, deg }.canonical();
            t.offer(st, left.value[i] + right.value[j], Back::Pair(i, j));
        }
    }
    t
}

/// Checks (V_j∖X)∩(V_k∖X) = ∅ and E_j∩E_k = ∅ at every join.
fn check_join_disjointness(nice: &NiceTD) -> Result<(), TdError> {
    let mut verts: Vec<BTreeSet<usize>> = Vec::with_capacity(nice.nodes.len());
    let mut edges: Vec<BTreeSet<(usize, usize)>> = Vec::with_capacity(nice.nodes.len());
    for (i, node) in nice.nodes.iter().enumerate() {
        let mut v: BTreeSet<usize> = node.bag.iter().copied().collect();
        let mut e = BTreeSet::new();
        for &c in &node.children {
            v.extend(verts[c].iter().copied());
            e.extend(edges[c].iter().copied());
        }
        if let NiceKind::IntroduceEdge(a, b) = node.kind {
            e.insert((a, b));
        }
        if node.kind == NiceKind::Join {
            let (j, k) = (node.children[0], node.children[1]);
            let outside = |s: &BTreeSet<usize>| s.iter().copied().filter(|x| node.bag.binary_search(x).is_err()).collect::<BTreeSet<_>>();
            if !outside(&verts[j]).is_disjoint(&outside(&verts[k])) || !edges[j].is_disjoint(&edges[k]) {
                return Err(TdError::Nice(format!("join node {i} has overlapping children")));
            }
        }
        verts.push(v);
        edges.push(e);
    }
    Ok(())
}

/// Best value and its edge set.
type Best = Option<(usize, Vec<(usize, usize)>)>;

/// Runs the DP on a special decomposition; returns the tree in G^s rooted at s′
/// and the largest table size seen.
fn run_special(sp: &SpecialTD) -> (Best, usize) {
    let nice = &sp.nice;
    let mut tables: Vec<Table> = Vec::with_capacity(nice.nodes.len());
    let mut max_states = 0;
    for node in &nice.nodes {
        let t = match node.kind {
            NiceKind::Leaf => {
                let mut t = Table::default();
                t.offer(TwState { x: vec![sp.s_prime], part: vec![0], deg: vec![0] }, 0, Back::Leaf);
                t
            }
            NiceKind::IntroduceVertex(v) => introduce_vertex(&tables[node.children[0]], v),
            NiceKind::IntroduceEdge(u, v) => introduce_edge(&tables[node.children[0]], u, v),
            NiceKind::Drop(v) => drop_vertex(&tables[node.children[0]], v),
            NiceKind::Join => join(&tables[node.children[0]], &tables[node.children[1]]),
        };
        assert!((t.states.len() as f64) <= state_bound(node.bag.len()), "state count above the analytic bound");
        max_states = max_states.max(t.states.len());
        tables.push(t);
    }
    let goal = TwState { x: vec![sp.s_prime], part: vec![0], deg: vec![1] };
    let Some(&start) = tables[nice.root].index.get(&goal) else { return (None, max_states) };
    let mut edges = Vec::new();
    let mut stack = vec![(nice.root, start)];
    while let Some((node, idx)) = stack.pop() {
        let kids = &nice.nodes[node].children;
        match tables[node].back[idx] {
            Back::Leaf => {}
            Back::Same(c) => stack.push((kids[0], c)),
            Back::Edge(c) => {
                if let NiceKind::IntroduceEdge(u, v) = nice.nodes[node].kind {
                    edges.push((u, v));
                }
                stack.push((kids[0], c));
            }
            Back::Pair(a, b) => {
                stack.push((kids[0], a));
                stack.push((kids[1], b));
            }
        }
    }
    (Some((tables[nice.root].value[start], edges)), max_states)
}

/// Largest binary tree containing `s` in which `s` has degree at most 2.
pub fn solve_rooted_tw(g: &UGraph, s: usize, td: &TreeDecomposition) -> Result<TwSolution, TdError> {
    let sp = to_special(td, g, s)?;
    check_join_disjointness(&sp.nice)?;
    let (found, max_states) = run_special(&sp);
    let tree = match found {
        Some((value, edges)) => {
            debug_assert_eq!(value, edges.len());
            let inner: Vec<(usize, usize)> = edges.into_iter().filter(|&(a, b)| a != sp.s_prime && b != sp.s_prime).collect();
            if inner.is_empty() {
                UndirBinaryTree::single(s)
            } else {
                UndirBinaryTree::from_edges(inner)
            }
        }
        None => UndirBinaryTree::single(s),
    };
    validate_undir_tree(g, &tree, Some(s)).map_err(|e| TdError::Nice(format!("witness failed validation: {e}")))?;
    Ok(TwSolution { edges: tree.size() - 1, tree, max_states })
}

/// Universal vertex s plus a heap-shaped tree B with |E(B)| = |E(G)| below it;
/// returns (G′, s, decomposition of G′).
fn rooting_gadget(g: &UGraph, td: &TreeDecomposition) -> (UGraph, usize, TreeDecomposition) {
    let (n, m) = (g.n(), g.m());
    let s = n;
    let b = |i: usize| n + 1 + i;
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    edges.extend((0..n).map(|v| (v, s)));
    edges.push((s, b(0)));
    edges.extend((1..=m).map(|i| (b((i - 1) / 2), b(i))));
    let gp = UGraph::new(n + m + 2, edges).expect("gadget edges are new");

    let mut bags: Vec<Vec<usize>> = td.bags.iter().map(|x| x.iter().copied().chain([s]).collect()).collect();
    let mut tedges = td.edges.clone();
    let hub = bags.len();
    bags.push(vec![s, b(0)]);
    tedges.push((0, hub));
    // one bag {s, parent, child} per edge of B, hung below its parent's bag
    let mut bag_of_child = vec![hub; m + 1];
    for i in 1..=m {
        let idx = bags.len();
        bags.push(vec![s, b((i - 1) / 2), b(i)]);
        tedges.push((bag_of_child[(i - 1) / 2], idx));
        bag_of_child[i] = idx;
    }
    (gp, s, TreeDecomposition::new(bags, tedges))
}

/// Unrooted MBT through the rooting gadget; the answer is the largest piece
/// of the rooted optimum inside G.
pub fn solve_unrooted_tw(g: &UGraph, td: &TreeDecomposition) -> Result<TwSolution, TdError> {
    validate_td(g, td)?;
    let n = g.n();
    if n == 0 {
        return Ok(TwSolution { edges: 0, tree: UndirBinaryTree::empty(), max_states: 0 });
    }
    let (gp, s, tdp) = rooting_gadget(g, td);
    let rooted = solve_rooted_tw(&gp, s, &tdp)?;
    let inside: Vec<(usize, usize)> = rooted.tree.edges().iter().copied().filter(|&(a, b)| a < n && b < n).collect();
    let verts: Vec<usize> = rooted.tree.vertices().iter().copied().filter(|&v| v < n).collect();
    let mut uf = UnionFind::new(n);
    for &(a, b) in &inside {
        uf.union(a, b);
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &v in &verts {
        groups.entry(uf.find(v)).or_default().push(v);
    }
    let best = groups.values().max_by_key(|vs| (vs.len(), std::cmp::Reverse(vs[0])));
    let tree = match best {
        Some(vs) => {
            let keep: BTreeSet<usize> = vs.iter().copied().collect();
            UndirBinaryTree::new(vs.iter().copied(), inside.iter().copied().filter(|(a, _)| keep.contains(a)))
        }
        None => UndirBinaryTree::single(0),
    };
    validate_undir_tree(g, &tree, None).map_err(|e| TdError::Nice(format!("witness failed validation: {e}")))?;
    Ok(TwSolution { edges: tree.size() - 1, tree, max_states: rooted.max_states })
}

/// Convenience: unrooted solve on the heuristic decomposition.
pub fn solve_unrooted_heuristic(g: &UGraph) -> Result<TwSolution, TdError> {
    solve_unrooted_tw(g, &heuristic_td(g))
}
