//! Tree decompositions: validation, a min-fill heuristic, PACE file formats
//! and the nice / s′-special normal forms consumed by the DP in [`dp`].

pub mod dp;

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::graph::{UGraph, UnionFind};

pub use dp::{solve_rooted_tw, solve_unrooted_tw, TwSolution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TdError {
    #[error("decomposition tree is not a tree")]
    NotATree,
    #[error("vertex {0} is in no bag")]
    Uncovered(usize),
    #[error("edge {{{0}, {1}}} is in no bag")]
    EdgeUncovered(usize, usize),
    #[error("bags containing vertex {0} are not connected")]
    Scattered(usize),
    #[error("bag vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("malformed nice decomposition: {0}")]
    Nice(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Sorted bag per tree node.
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, edges }
    }

    /// Largest bag size minus one; 0 when every bag is empty.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }
}

/// Checks (T1)–(T3) and that the decomposition tree is a tree.
pub fn validate_td(g: &UGraph, td: &TreeDecomposition) -> Result<(), TdError> {
    let k = td.bags.len();
    if k == 0 || td.edges.len() != k - 1 {
        return Err(TdError::NotATree);
    }
    let mut uf = UnionFind::new(k);
    for &(a, b) in &td.edges {
        if a >= k || b >= k || !uf.union(a, b) {
            return Err(TdError::NotATree);
        }
    }
    let mut nodes_of: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= g.n() {
                return Err(TdError::VertexOutOfRange(v));
            }
            nodes_of[v].push(i);
        }
    }
    if let Some(v) = nodes_of.iter().position(Vec::is_empty) {
        return Err(TdError::Uncovered(v));
    }
    for &(u, v) in g.edges() {
        if !td.bags.iter().any(|b| b.binary_search(&u).is_ok() && b.binary_search(&v).is_ok()) {
            return Err(TdError::EdgeUncovered(u, v));
        }
    }
    // a sub-forest of a tree is connected iff it has one edge fewer than nodes
    for (v, nodes) in nodes_of.iter().enumerate() {
        let inside = td
            .edges
            .iter()
            .filter(|&&(a, b)| td.bags[a].binary_search(&v).is_ok() && td.bags[b].binary_search(&v).is_ok())
            .count();
        if inside + 1 != nodes.len() {
            return Err(TdError::Scattered(v));
        }
    }
    Ok(())
}

/// Min-fill elimination (ties by degree, then id) turned into a clique tree.
pub fn heuristic_td(g: &UGraph) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition::new(vec![Vec::new()], Vec::new());
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    let mut pos = vec![0; n];
    let mut bags = Vec::with_capacity(n);
    let mut later: Vec<Vec<usize>> = Vec::with_capacity(n);
    for step in 0..n {
        let fill = |v: usize| {
            let ns: Vec<usize> = adj[v].iter().copied().collect();
            let mut f = 0;
            for (i, &a) in ns.iter().enumerate() {
                f += ns[i + 1..].iter().filter(|&&b| !adj[a].contains(&b)).count();
            }
            f
        };
        let v = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (fill(v), adj[v].len(), v)).expect("a vertex remains");
        let ns: Vec<usize> = adj[v].iter().copied().collect();
        for &a in &ns {
            adj[a].remove(&v);
            for &b in &ns {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
        alive[v] = false;
        pos[v] = step;
        let mut bag = ns.clone();
        bag.push(v);
        bags.push(bag);
        later.push(ns);
    }
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (step, ns) in later.iter().enumerate() {
        match ns.iter().map(|&w| pos[w]).min() {
            Some(p) => edges.push((step, p)),
            None => roots.push(step),
        }
    }
    edges.extend(roots.windows(2).map(|w| (w[0], w[1])));
    TreeDecomposition::new(bags, edges)
}

fn perr(line: usize, msg: &str) -> TdError {
    TdError::Parse { line, msg: msg.to_string() }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty() && t[0] != "c")
}

fn parse_ids(line: usize, toks: &[&str], n: usize) -> Result<Vec<usize>, TdError> {
    toks.iter()
        .map(|t| match t.parse::<usize>() {
            Ok(x) if (1..=n).contains(&x) => Ok(x - 1),
            _ => Err(perr(line, "expected a 1-based vertex id")),
        })
        .collect()
}

/// PACE `.gr`: `p tw <n> <m>` then 1-based edges.
pub fn read_gr(text: &str) -> Result<UGraph, TdError> {
    let mut lines = content_lines(text);
    let (hl, head) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
    let (n, m) = match head.as_slice() {
        ["p", "tw", n, m] => (
            n.parse::<usize>().map_err(|_| perr(hl, "bad vertex count"))?,
            m.parse::<usize>().map_err(|_| perr(hl, "bad edge count"))?,
        ),
        _ => return Err(perr(hl, "expected 'p tw <n> <m>'")),
    };
    let mut edges = Vec::with_capacity(m);
    for (ln, toks) in lines {
        let ids = parse_ids(ln, &toks, n)?;
        let [u, v] = ids[..] else { return Err(perr(ln, "expected 'u v'")) };
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(perr(hl, "edge count does not match header"));
    }
    UGraph::new(n, edges).map_err(|e| perr(hl, &e.to_string()))
}

pub fn write_gr(g: &UGraph) -> String {
    let mut s = format!("p tw {} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        s.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    s
}

/// PACE `.td`: `s td <#bags> <width+1> <n>`, `b <i> <v>...` lines, then tree edges.
pub fn read_td(text: &str) -> Result<TreeDecomposition, TdError> {
    let mut lines = content_lines(text);
    let (hl, head) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
    let nums: Vec<usize> = match head.as_slice() {
        ["s", "td", rest @ ..] if rest.len() == 3 => {
            rest.iter().map(|t| t.parse().map_err(|_| perr(hl, "bad header number"))).collect::<Result<_, _>>()?
        }
        _ => return Err(perr(hl, "expected 's td <bags> <width+1> <n>'")),
    };
    let (nb, declared, n) = (nums[0], nums[1], nums[2]);
    let mut bags: Vec<Option<Vec<usize>>> = vec![None; nb];
    let mut edges = Vec::new();
    for (ln, toks) in lines {
        if toks[0] == "b" {
            let idx = parse_ids(ln, &toks[1..2.min(toks.len())], nb)?;
            let &[i] = idx.as_slice() else { return Err(perr(ln, "missing bag index")) };
            if bags[i].is_some() {
                return Err(perr(ln, "bag listed twice"));
            }
            bags[i] = Some(parse_ids(ln, &toks[2..], n)?);
        } else {
            let ids = parse_ids(ln, &toks, nb)?;
            let [a, b] = ids[..] else { return Err(perr(ln, "expected 'i j'")) };
            edges.push((a, b));
        }
    }
    let bags: Vec<Vec<usize>> = bags.into_iter().enumerate().map(|(i, b)| b.ok_or_else(|| perr(hl, &format!("bag {} missing", i + 1)))).collect::<Result<_, _>>()?;
    let td = TreeDecomposition::new(bags, edges);
    if td.bags.iter().map(Vec::len).max().unwrap_or(0) != declared {
        return Err(perr(hl, "declared bag size does not match bags"));
    }
    Ok(td)
}

pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let maxbag = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    let mut s = format!("s td {} {} {}\n", td.bags.len(), maxbag, n);
    for (i, bag) in td.bags.iter().enumerate() {
        s.push_str(&format!("b {}", i + 1));
        for v in bag {
            s.push_str(&format!(" {}", v + 1));
        }
        s.push('\n');
    }
    for &(a, b) in &td.edges {
        s.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NiceKind {
    Leaf,
    IntroduceVertex(usize),
    Drop(usize),
    /// Endpoints in increasing order.
    IntroduceEdge(usize, usize),
    Join,
}

#[derive(Clone, Debug)]
pub struct NiceNode {
    pub kind: NiceKind,
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// Children always precede parents, so index order is a valid bottom-up order.
#[derive(Clone, Debug)]
pub struct NiceTD {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceTD {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|x| x.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut p = vec![None; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                p[c] = Some(i);
            }
        }
        p
    }

    pub fn as_td(&self) -> TreeDecomposition {
        let edges = self.nodes.iter().enumerate().flat_map(|(i, x)| x.children.iter().map(move |&c| (c, i))).collect();
        TreeDecomposition::new(self.nodes.iter().map(|x| x.bag.clone()).collect(), edges)
    }
}

struct NiceBuilder<'a> {
    g: &'a UGraph,
    td: &'a TreeDecomposition,
    adj: Vec<Vec<usize>>,
    nodes: Vec<NiceNode>,
    introduced: HashMap<(usize, usize), bool>,
    base: Vec<usize>,
}

impl NiceBuilder<'_> {
    fn push(&mut self, kind: NiceKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    fn introduce(&mut self, cur: usize, v: usize) -> usize {
        let mut bag = self.nodes[cur].bag.clone();
        let at = bag.binary_search(&v).expect_err("introduced vertex is new");
        bag.insert(at, v);
        self.push(NiceKind::IntroduceVertex(v), bag, vec![cur])
    }

    /// Introduce-edge chain for every pending edge at v, then the drop node.
    fn drop_vertex(&mut self, mut cur: usize, v: usize) -> usize {
        let bag = self.nodes[cur].bag.clone();
        let mut nbrs = self.g.neighbors(v).to_vec();
        nbrs.sort_unstable();
        for w in nbrs {
            let key = (v.min(w), v.max(w));
            if bag.binary_search(&w).is_ok() && !self.introduced[&key] {
                self.introduced.insert(key, true);
                cur = self.push(NiceKind::IntroduceEdge(key.0, key.1), bag.clone(), vec![cur]);
            }
        }
        let smaller: Vec<usize> = bag.into_iter().filter(|&x| x != v).collect();
        self.push(NiceKind::Drop(v), smaller, vec![cur])
    }

    fn transition(&mut self, mut cur: usize, target: &[usize]) -> usize {
        let from = self.nodes[cur].bag.clone();
        for v in from.iter().copied().filter(|v| target.binary_search(v).is_err()) {
            cur = self.drop_vertex(cur, v);
        }
        for v in target.iter().copied().filter(|v| from.binary_search(v).is_err()) {
            cur = self.introduce(cur, v);
        }
        cur
    }

    fn build(&mut self, t: usize, parent: Option<usize>) -> usize {
        let kids: Vec<usize> = self.adj[t].iter().copied().filter(|&c| Some(c) != parent).collect();
        let target = self.td.bags[t].clone();
        let mut branches = Vec::new();
        for c in kids {
            let b = self.build(c, Some(t));
            branches.push(self.transition(b, &target));
        }
        if branches.is_empty() {
            let leaf = self.push(NiceKind::Leaf, self.base.clone(), Vec::new());
            return self.transition(leaf, &target);
        }
        let mut acc = branches[0];
        for &b in &branches[1..] {
            acc = self.push(NiceKind::Join, target.clone(), vec![acc, b]);
        }
        acc
    }
}

/// Nice form with `keep` present in every bag (leaf and root bags are `keep`).
fn make_nice(g: &UGraph, td: &TreeDecomposition, keep: &[usize]) -> NiceTD {
    let mut b = NiceBuilder {
        g,
        td,
        adj: td.adjacency(),
        nodes: Vec::new(),
        introduced: g.edges().iter().map(|&(u, v)| ((u.min(v), u.max(v)), false)).collect(),
        base: keep.to_vec(),
    };
    let top = b.build(0, None);
    let root = b.transition(top, keep);
    debug_assert!(b.introduced.values().all(|&x| x), "every edge gets introduced");
    NiceTD { nodes: b.nodes, root }
}

pub fn to_nice(td: &TreeDecomposition, g: &UGraph) -> Result<NiceTD, TdError> {
    validate_td(g, td)?;
    Ok(make_nice(g, td, &[]))
}

/// Nice decomposition of G^s = G plus pendant s′ = n on s, with s′ in every bag.
#[derive(Clone, Debug)]
pub struct SpecialTD {
    pub nice: NiceTD,
    pub graph: UGraph,
    pub s: usize,
    pub s_prime: usize,
}

pub fn to_special(td: &TreeDecomposition, g: &UGraph, s: usize) -> Result<SpecialTD, TdError> {
    if s >= g.n() {
        return Err(TdError::VertexOutOfRange(s));
    }
    validate_td(g, td)?;
    let sp = g.n();
    let gs = UGraph::new(sp + 1, g.edges().iter().copied().chain([(s, sp)])).expect("pendant edge is new");
    let bags = td.bags.iter().map(|b| b.iter().copied().chain([sp]).collect()).collect();
    let lifted = TreeDecomposition::new(bags, td.edges.clone());
    let nice = make_nice(&gs, &lifted, &[sp]);
    let special = SpecialTD { nice, graph: gs, s, s_prime: sp };
    validate_nice(&special.nice, &special.graph, &[sp])?;
    Ok(special)
}

/// Structural check of a nice decomposition whose leaf and root bags equal `keep`.
pub fn validate_nice(nice: &NiceTD, g: &UGraph, keep: &[usize]) -> Result<(), TdError> {
    let bad = |m: String| Err(TdError::Nice(m));
    validate_td(g, &nice.as_td())?;
    let parents = nice.parents();
    if nice.nodes[nice.root].bag != keep || parents[nice.root].is_some() {
        return bad("root bag must equal the kept set".into());
    }
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, node) in nice.nodes.iter().enumerate() {
        let child_bag = |k: usize| &nice.nodes[node.children[k]].bag;
        let ok = match (&node.kind, node.children.len()) {
            (NiceKind::Leaf, 0) => node.bag == keep,
            (NiceKind::IntroduceVertex(v), 1) => {
                let mut b = child_bag(0).clone();
                !b.contains(v) && {
                    b.push(*v);
                    b.sort_unstable();
                    b == node.bag
                }
            }
            (NiceKind::Drop(v), 1) => {
                child_bag(0).contains(v) && child_bag(0).iter().filter(|&x| x != v).copied().collect::<Vec<_>>() == node.bag
            }
            (NiceKind::IntroduceEdge(u, v), 1) => {
                *seen.entry((*u, *v)).or_default() += 1;
                let mut up = parents[i];
                while let Some(p) = up.filter(|&p| matches!(nice.nodes[p].kind, NiceKind::IntroduceEdge(..))) {
                    up = parents[p];
                }
                let placed = matches!(up.map(|p| &nice.nodes[p].kind), Some(NiceKind::Drop(x)) if x == u || x == v);
                g.has_edge(*u, *v) && node.bag == *child_bag(0) && node.bag.contains(u) && node.bag.contains(v) && placed
            }
            (NiceKind::Join, 2) => node.bag == *child_bag(0) && node.bag == *child_bag(1),
            _ => false,
        };
        if !ok {
            return bad(format!("node {i} ({:?}) breaks its kind's rule", node.kind));
        }
        if node.children.iter().any(|&c| c >= i) {
            return bad(format!("node {i} precedes a child"));
        }
    }
    if seen.len() != g.m() || seen.values().any(|&c| c != 1) {
        return bad("every edge must be introduced exactly once".into());
    }
    Ok(())
}
