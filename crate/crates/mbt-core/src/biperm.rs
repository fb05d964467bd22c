//! Maximum binary trees in bipartite permutation graphs.
//!
//! Under a strong ordering some maximum tree is crossing-free, and such a
//! tree starts with an edge {s_i, t_j} between its smallest vertices, one of
//! which is a leaf. That gives an O(n³) DP over suffix pairs (i, j).

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{rng_from_seed, validate_undir_tree, UGraph, UndirBinaryTree};

/// Default vertex cap for the exhaustive ordering search.
pub const EXHAUSTIVE_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BipermError {
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("ordering sides do not match the graph: {0}")]
    SidesMismatch(String),
    #[error("no strong ordering found for the component containing vertex {0}")]
    NoStrongOrdering(usize),
    #[error("malformed intervals: {0}")]
    BadIntervals(String),
    #[error("graph is not connected")]
    Disconnected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongOrdering {
    pub s_order: Vec<usize>,
    pub t_order: Vec<usize>,
}

/// Pair (s, s′, t, t′) breaking the strong-ordering condition, positions in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub s: usize,
    pub s2: usize,
    pub t: usize,
    pub t2: usize,
}

fn adjacency_matrix(g: &UGraph) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; g.n()]; g.n()];
    for &(u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    adj
}

fn check_sides(g: &UGraph, ord: &StrongOrdering) -> Result<(), BipermError> {
    let mut side = vec![None; g.n()];
    for (list, tag) in [(&ord.s_order, 0u8), (&ord.t_order, 1u8)] {
        for &v in list {
            if v >= g.n() || side[v].is_some() {
                return Err(BipermError::SidesMismatch(format!("vertex {v} repeated or out of range")));
            }
            side[v] = Some(tag);
        }
    }
    if let Some(v) = side.iter().position(|s| s.is_none()) {
        return Err(BipermError::SidesMismatch(format!("vertex {v} missing")));
    }
    if let Some(&(u, v)) = g.edges().iter().find(|&&(u, v)| side[u] == side[v]) {
        return Err(BipermError::SidesMismatch(format!("edge {{{u}, {v}}} inside one side")));
    }
    Ok(())
}

/// Direct quantifier check; on connected graphs also the interval property.
pub fn validate_strong_ordering(g: &UGraph, ord: &StrongOrdering) -> Result<Option<Violation>, BipermError> {
    check_sides(g, ord)?;
    let adj = adjacency_matrix(g);
    let (ss, ts) = (&ord.s_order, &ord.t_order);
    for i in 0..ss.len() {
        for i2 in i + 1..ss.len() {
            for j in 0..ts.len() {
                for j2 in j + 1..ts.len() {
                    let (s, s2, t, t2) = (ss[i], ss[i2], ts[j], ts[j2]);
                    if adj[s][t2] && adj[s2][t] && !(adj[s][t] && adj[s2][t2]) {
                        return Ok(Some(Violation { s, s2, t, t2 }));
                    }
                }
            }
        }
    }
    if g.m() > 0 && is_connected(g) {
        debug_assert!(intervals_of(&adj, ord).is_some(), "strong orderings of connected graphs have interval neighbourhoods");
    }
    Ok(None)
}

fn is_connected(g: &UGraph) -> bool {
    let comp = g.components();
    comp.iter().all(|&c| c == comp[0])
}

/// Interval [a, b] (0-based positions in `t_order`) of every S-vertex when
/// neighbourhoods are intervals with nondecreasing endpoints.
fn intervals_of(adj: &[Vec<bool>], ord: &StrongOrdering) -> Option<Vec<(usize, usize)>> {
    let mut out = Vec::with_capacity(ord.s_order.len());
    for &s in &ord.s_order {
        let pos: Vec<usize> = ord.t_order.iter().enumerate().filter(|(_, &t)| adj[s][t]).map(|(j, _)| j).collect();
        let (&a, &b) = (pos.first()?, pos.last()?);
        if b - a + 1 != pos.len() {
            return None;
        }
        out.push((a, b));
    }
    out.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1).then_some(out)
}

/// Two-colouring; the class of the smallest vertex of each component is S.
pub fn bipartition(g: &UGraph) -> Result<Vec<bool>, BipermError> {
    let mut color: Vec<Option<bool>> = vec![None; g.n()];
    for start in 0..g.n() {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let c = color[v].expect("queued vertices are coloured");
            for &w in g.neighbors(v) {
                match color[w] {
                    None => {
                        color[w] = Some(!c);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == c => return Err(BipermError::NotBipartite),
                    _ => {}
                }
            }
        }
    }
    Ok(color.into_iter().map(|c| c.unwrap_or(false)).collect())
}

/// Sorts one side by the (first, last, mean) position of its neighbours on the other.
fn sort_by_neighbors(side: &mut [usize], other: &[usize], adj: &[Vec<bool>]) {
    let mut pos = vec![usize::MAX; adj.len()];
    for (i, &v) in other.iter().enumerate() {
        pos[v] = i;
    }
    let key = |v: usize| {
        let ps: Vec<usize> = (0..adj.len()).filter(|&w| adj[v][w] && pos[w] != usize::MAX).map(|w| pos[w]).collect();
        let lo = ps.iter().copied().min().unwrap_or(usize::MAX);
        let hi = ps.iter().copied().max().unwrap_or(usize::MAX);
        (lo, hi, v)
    };
    side.sort_by_key(|&v| key(v));
}

fn heuristic(g: &UGraph, adj: &[Vec<bool>], s_side: &[usize], t_side: &[usize]) -> Option<StrongOrdering> {
    let n = g.n();
    let mut starts: Vec<usize> = s_side.iter().chain(t_side).copied().collect();
    starts.sort_by_key(|&v| (g.degree(v), v));
    for &start in &starts {
        // BFS distance as the first coarse key
        let mut dist = vec![usize::MAX; n];
        dist[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        let mut t: Vec<usize> = t_side.to_vec();
        t.sort_by_key(|&v| (dist[v], v));
        let mut s: Vec<usize> = s_side.to_vec();
        s.sort_by_key(|&v| (dist[v], v));
        for _ in 0..2 * n + 2 {
            let (old_s, old_t) = (s.clone(), t.clone());
            sort_by_neighbors(&mut s, &t, adj);
            sort_by_neighbors(&mut t, &s, adj);
            let ord = StrongOrdering { s_order: s.clone(), t_order: t.clone() };
            if matches!(validate_strong_ordering(g, &ord), Ok(None)) {
                return Some(ord);
            }
            if s == old_s && t == old_t {
                break;
            }
        }
    }
    None
}

/// Backtracking over T-orders in which every S-neighbourhood stays
/// consecutive; the S-order then follows by sorting intervals.
fn exhaustive(g: &UGraph, adj: &[Vec<bool>], s_side: &[usize], t_side: &[usize]) -> Option<StrongOrdering> {
    struct Search<'a> {
        g: &'a UGraph,
        adj: &'a [Vec<bool>],
        s_side: &'a [usize],
        t_side: &'a [usize],
        used: Vec<bool>,
        order: Vec<usize>,
        /// 0 = no neighbour placed yet, 1 = run open, 2 = run closed
        state: Vec<u8>,
    }
    impl Search<'_> {
        fn go(&mut self) -> Option<StrongOrdering> {
            if self.order.len() == self.t_side.len() {
                let mut s = self.s_side.to_vec();
                sort_by_neighbors(&mut s, &self.order, self.adj);
                let ord = StrongOrdering { s_order: s, t_order: self.order.clone() };
                return matches!(validate_strong_ordering(self.g, &ord), Ok(None)).then_some(ord);
            }
            for idx in 0..self.t_side.len() {
                if self.used[idx] {
                    continue;
                }
                let t = self.t_side[idx];
                let saved = self.state.clone();
                let mut ok = true;
                for (k, &s) in self.s_side.iter().enumerate() {
                    let st = &mut self.state[k];
                    match (self.adj[s][t], *st) {
                        (true, 2) => {
                            ok = false;
                            break;
                        }
                        (true, _) => *st = 1,
                        (false, 1) => *st = 2,
                        _ => {}
                    }
                }
                if ok {
                    self.used[idx] = true;
                    self.order.push(t);
                    if let Some(found) = self.go() {
                        return Some(found);
                    }
                    self.order.pop();
                    self.used[idx] = false;
                }
                self.state = saved;
            }
            None
        }
    }
    let mut search = Search {
        g,
        adj,
        s_side,
        t_side,
        used: vec![false; t_side.len()],
        order: Vec::new(),
        state: vec![0; s_side.len()],
    };
    search.go()
}

/// Heuristic first; exhaustive search when it fails and n ≤ `cap`.
pub fn find_strong_ordering_with_cap(g: &UGraph, cap: usize) -> Result<StrongOrdering, BipermError> {
    let color = bipartition(g)?;
    if g.n() > 0 && !is_connected(g) {
        return Err(BipermError::Disconnected);
    }
    let s_side: Vec<usize> = (0..g.n()).filter(|&v| !color[v]).collect();
    let t_side: Vec<usize> = (0..g.n()).filter(|&v| color[v]).collect();
    let adj = adjacency_matrix(g);
    if let Some(ord) = heuristic(g, &adj, &s_side, &t_side) {
        return Ok(ord);
    }
    if g.n() <= cap {
        if let Some(ord) = exhaustive(g, &adj, &s_side, &t_side) {
            return Ok(ord);
        }
    }
    Err(BipermError::NoStrongOrdering(0))
}

pub fn find_strong_ordering(g: &UGraph) -> Result<StrongOrdering, BipermError> {
    find_strong_ordering_with_cap(g, EXHAUSTIVE_CAP)
}

/// Graph with N(s_i) = {t_a .. t_b} (1-based, inclusive); vertex ids are
/// shuffled by `seed`. Returns the graph and the generating ordering.
pub fn gen_biperm(intervals: &[(usize, usize)], seed: u64) -> Result<(UGraph, StrongOrdering), BipermError> {
    let bad = |m: &str| Err(BipermError::BadIntervals(m.to_string()));
    if intervals.is_empty() {
        return bad("no intervals");
    }
    for (i, &(a, b)) in intervals.iter().enumerate() {
        if a < 1 || a > b {
            return bad(&format!("interval {i} is not 1 <= a <= b"));
        }
    }
    if intervals.windows(2).any(|w| w[1].0 < w[0].0 || w[1].1 < w[0].1) {
        return bad("endpoints must be nondecreasing");
    }
    let p = intervals.len();
    let q = intervals.iter().map(|&(_, b)| b).max().expect("nonempty");
    let mut covered = vec![false; q + 1];
    for &(a, b) in intervals {
        covered[a..=b].iter_mut().for_each(|c| *c = true);
    }
    if covered[1..].iter().any(|&c| !c) {
        return bad("intervals do not cover every T-vertex");
    }
    let mut ids: Vec<usize> = (0..p + q).collect();
    ids.shuffle(&mut rng_from_seed(seed));
    let s_order: Vec<usize> = ids[..p].to_vec();
    let t_order: Vec<usize> = ids[p..].to_vec();
    let edges = intervals.iter().enumerate().flat_map(|(i, &(a, b))| {
        let (s, t) = (&s_order, &t_order);
        (a..=b).map(move |j| (s[i], t[j - 1]))
    });
    let g = UGraph::new(p + q, edges).expect("interval edges are simple");
    let ord = StrongOrdering { s_order, t_order };
    debug_assert_eq!(validate_strong_ordering(&g, &ord), Ok(None));
    Ok((g, ord))
}

/// Random nondecreasing intervals over q T-vertices covering all of them.
pub fn random_intervals(p: usize, q: usize, seed: u64) -> Vec<(usize, usize)> {
    use rand::Rng;
    let mut rng = rng_from_seed(seed);
    loop {
        let mut a: Vec<usize> = (0..p).map(|_| rng.gen_range(1..=q)).collect();
        let mut b: Vec<usize> = (0..p).map(|_| rng.gen_range(1..=q)).collect();
        a.sort_unstable();
        b.sort_unstable();
        let iv: Vec<(usize, usize)> = a.into_iter().zip(b).collect();
        if iv.iter().all(|&(x, y)| x <= y) && gen_biperm(&iv, 0).is_ok() {
            return iv;
        }
    }
}

#[derive(Clone, Debug)]
pub struct BipermResult {
    /// Edge count of the best tree.
    pub edges: usize,
    pub tree: UndirBinaryTree,
    /// Ordering used for each component with at least one edge.
    pub orderings: Vec<StrongOrdering>,
}

#[derive(Clone, Copy)]
enum Choice {
    None,
    Single,
    /// Continue in the other table at offset k.
    Step(usize),
}

struct Tables {
    s: Vec<Vec<usize>>,
    t: Vec<Vec<usize>>,
    s_choice: Vec<Vec<Choice>>,
    t_choice: Vec<Vec<Choice>>,
}

/// Fills MBT_S and MBT_T for one strongly ordered connected component.
fn fill_tables(adj: &[Vec<bool>], ss: &[usize], ts: &[usize]) -> Tables {
    let (p, q) = (ss.len(), ts.len());
    let mut tb = Tables {
        s: vec![vec![0; q + 2]; p + 2],
        t: vec![vec![0; q + 2]; p + 2],
        s_choice: vec![vec![Choice::None; q + 2]; p + 2],
        t_choice: vec![vec![Choice::None; q + 2]; p + 2],
    };
    // 1-based like the recurrences; N(t_j) within [i, j] is s_i .. s_{i+d-1}
    let run = |from: usize, len: usize, hit: &dyn Fn(usize) -> bool| (from..=len).take_while(|&x| hit(x)).count();
    for i in (1..=p).rev() {
        for j in (1..=q).rev() {
            if adj[ss[i - 1]][ts[j - 1]] {
                let d = run(i, p, &|x| adj[ss[x - 1]][ts[j - 1]]);
                if d == 1 {
                    tb.s[i][j] = 1;
                    tb.s_choice[i][j] = Choice::Single;
                } else {
                    let mut best = (tb.t[i + 1][j] + 1, 1);
                    for k in 2..d {
                        if tb.t[i + k][j] + 2 > best.0 {
                            best = (tb.t[i + k][j] + 2, k);
                        }
                    }
                    tb.s[i][j] = best.0;
                    tb.s_choice[i][j] = Choice::Step(best.1);
                }
                let d = run(j, q, &|y| adj[ss[i - 1]][ts[y - 1]]);
                if d == 1 {
                    tb.t[i][j] = 1;
                    tb.t_choice[i][j] = Choice::Single;
                } else {
                    let mut best = (tb.s[i][j + 1] + 1, 1);
                    for k in 2..d {
                        if tb.s[i][j + k] + 2 > best.0 {
                            best = (tb.s[i][j + k] + 2, k);
                        }
                    }
                    tb.t[i][j] = best.0;
                    tb.t_choice[i][j] = Choice::Step(best.1);
                }
            }
        }
    }
    tb
}

fn rebuild(tb: &Tables, ss: &[usize], ts: &[usize], mut i: usize, mut j: usize, mut in_s: bool) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    loop {
        let choice = if in_s { tb.s_choice[i][j] } else { tb.t_choice[i][j] };
        let (s, t) = (ss[i - 1], ts[j - 1]);
        match choice {
            Choice::None => unreachable!("rebuild starts from a positive entry"),
            Choice::Single => {
                edges.push((s, t));
                return edges;
            }
            Choice::Step(k) => {
                edges.push((s, t));
                if in_s {
                    if k >= 2 {
                        edges.push((ss[i], t));
                    }
                    i += k;
                } else {
                    if k >= 2 {
                        edges.push((s, ts[j]));
                    }
                    j += k;
                }
                in_s = !in_s;
            }
        }
    }
}

/// Best crossing-free tree of one connected component under `ord`.
fn solve_component(adj: &[Vec<bool>], ord: &StrongOrdering) -> Vec<(usize, usize)> {
    let (ss, ts) = (&ord.s_order, &ord.t_order);
    let tb = fill_tables(adj, ss, ts);
    let mut best: Option<(usize, usize, usize, bool)> = None;
    for i in 1..=ss.len() {
        for j in 1..=ts.len() {
            for (val, in_s) in [(tb.s[i][j], true), (tb.t[i][j], false)] {
                if val > 0 && best.is_none_or(|b| val > b.0) {
                    best = Some((val, i, j, in_s));
                }
            }
        }
    }
    match best {
        Some((_, i, j, in_s)) => rebuild(&tb, ss, ts, i, j, in_s),
        None => Vec::new(),
    }
}

pub fn solve_biperm(g: &UGraph) -> Result<BipermResult, BipermError> {
    solve_biperm_with_cap(g, EXHAUSTIVE_CAP)
}

pub fn solve_biperm_with_cap(g: &UGraph, cap: usize) -> Result<BipermResult, BipermError> {
    bipartition(g)?;
    if g.n() == 0 {
        return Ok(BipermResult { edges: 0, tree: UndirBinaryTree::empty(), orderings: Vec::new() });
    }
    let comp = g.components();
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (v, &c) in comp.iter().enumerate() {
        groups.entry(c).or_default().push(v);
    }
    let mut best = UndirBinaryTree::single(0);
    let mut orderings = Vec::new();
    for verts in groups.values() {
        if verts.len() < 2 {
            continue;
        }
        let sub = g.induced(verts);
        let ord = find_strong_ordering_with_cap(&sub, cap).map_err(|_| BipermError::NoStrongOrdering(verts[0]))?;
        let adj = adjacency_matrix(&sub);
        let edges = solve_component(&adj, &ord);
        let tree = UndirBinaryTree::from_edges(edges.iter().map(|&(a, b)| (verts[a], verts[b])));
        orderings.push(StrongOrdering {
            s_order: ord.s_order.iter().map(|&v| verts[v]).collect(),
            t_order: ord.t_order.iter().map(|&v| verts[v]).collect(),
        });
        if tree.size() > best.size() {
            best = tree;
        }
    }
    debug_assert!(validate_undir_tree(g, &best, None).is_ok());
    Ok(BipermResult { edges: best.size() - 1, tree: best, orderings })
}

/// Whether `edges` has two edges {s1,t1}, {s2,t2} with s1 < s2 and t2 < t1.
pub fn has_crossing(ord: &StrongOrdering, edges: &[(usize, usize)]) -> bool {
    let mut pos = std::collections::HashMap::new();
    for (i, &v) in ord.s_order.iter().enumerate() {
        pos.insert(v, (true, i));
    }
    for (i, &v) in ord.t_order.iter().enumerate() {
        pos.insert(v, (false, i));
    }
    let st: Vec<(usize, usize)> = edges
        .iter()
        .filter_map(|&(u, v)| match (pos.get(&u), pos.get(&v)) {
            (Some(&(true, a)), Some(&(false, b))) | (Some(&(false, b)), Some(&(true, a))) => Some((a, b)),
            _ => None,
        })
        .collect();
    st.iter().any(|&(s1, t1)| st.iter().any(|&(s2, t2)| s1 < s2 && t2 < t1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_mbt_undirected;

    fn path(n: usize) -> UGraph {
        UGraph::new(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    #[test]
    fn validation_examples() {
        let p4 = path(4);
        let ord = StrongOrdering { s_order: vec![0, 2], t_order: vec![1, 3] };
        assert_eq!(validate_strong_ordering(&p4, &ord), Ok(None));
        // s1=0,t1=1,s2=2,t2=3 with t2 ordered before t1
        let two_k2 = UGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        let bad = StrongOrdering { s_order: vec![0, 2], t_order: vec![3, 1] };
        assert!(validate_strong_ordering(&two_k2, &bad).unwrap().is_some());
        let wrong = StrongOrdering { s_order: vec![0, 1], t_order: vec![2, 3] };
        assert!(validate_strong_ordering(&p4, &wrong).is_err());
    }

    #[test]
    fn finds_orderings() {
        let p6 = path(6);
        let ord = find_strong_ordering(&p6).unwrap();
        assert_eq!(validate_strong_ordering(&p6, &ord), Ok(None));
        let k23 = UGraph::new(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
        assert!(find_strong_ordering(&k23).is_ok());
        let c6 = UGraph::new(6, (0..6).map(|v| (v, (v + 1) % 6))).unwrap();
        assert!(matches!(find_strong_ordering(&c6), Err(BipermError::NoStrongOrdering(_))));
        let tri = UGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(find_strong_ordering(&tri), Err(BipermError::NotBipartite));
    }

    #[test]
    fn generator_examples() {
        let (g, ord) = gen_biperm(&[(1, 1), (1, 2), (2, 2)], 4).unwrap();
        assert_eq!((g.n(), g.m()), (5, 4));
        assert_eq!(validate_strong_ordering(&g, &ord), Ok(None));
        let (star, _) = gen_biperm(&[(1, 4)], 0).unwrap();
        assert_eq!(star.m(), 4);
        assert!(gen_biperm(&[(2, 2), (1, 2)], 0).is_err());
        assert!(gen_biperm(&[(1, 1), (3, 3)], 0).is_err());
    }

    #[test]
    fn solver_examples() {
        assert_eq!(solve_biperm(&path(4)).unwrap().edges, 3);
        let k13 = UGraph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(solve_biperm(&k13).unwrap().edges, 3);
        let k23 = UGraph::new(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(solve_biperm(&k23).unwrap().edges, 4);
        assert_eq!(solve_biperm(&UGraph::empty(3)).unwrap().edges, 0);
    }

    #[test]
    fn solver_matches_oracle_and_is_crossing_free() {
        for seed in 0..80u64 {
            let p = 1 + (seed % 6) as usize;
            let q = 1 + ((seed / 6) % 6) as usize;
            let iv = random_intervals(p, q, seed);
            let (g, _) = gen_biperm(&iv, seed).unwrap();
            let res = solve_biperm(&g).unwrap();
            assert_eq!(res.edges + 1, brute_mbt_undirected(&g, 3).unwrap().size, "seed {seed}");
            assert!(validate_undir_tree(&g, &res.tree, None).is_ok());
            let ord = res.orderings.iter().find(|o| o.s_order.contains(&res.tree.vertices()[0]) || o.t_order.contains(&res.tree.vertices()[0]));
            if let Some(ord) = ord {
                assert!(!has_crossing(ord, res.tree.edges()));
            }
        }
    }
}
