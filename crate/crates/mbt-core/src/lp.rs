//! Cut-constraint model for rooted MBT in digraphs. Emits the model as an
//! LP file and verifies fractional points exactly, checking the exponential
//! cut family through max-flow instead of subset enumeration.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Digraph, DirBinaryTree};

/// Largest n for which the cut family is written out.
pub const EMIT_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("n = {n} exceeds the emission cap {cap}: the model would have {cuts} cut constraints")]
    TooLarge { n: usize, cap: usize, cuts: u128 },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("solution shape mismatch: {0}")]
    Shape(String),
    #[error("bad rational `{0}`")]
    BadRational(String),
    #[error("solution is infeasible ({0} violated constraints)")]
    Infeasible(usize),
    #[error("oracle optimum must be positive")]
    ZeroOptimum,
}

/// Y per vertex and X per arc (indexed like `g.arcs()`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalSolution {
    pub y: Vec<BigRational>,
    pub x: Vec<BigRational>,
}

/// Serialized form: rationals as "p/q" or integer strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolutionJson {
    pub y: Vec<String>,
    pub x: Vec<ArcValue>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArcValue {
    pub arc: [usize; 2],
    pub value: String,
}

pub fn parse_rational(s: &str) -> Result<BigRational, LpError> {
    BigRational::from_str(s.trim()).map_err(|_| LpError::BadRational(s.to_string()))
}

pub fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

impl FractionalSolution {
    /// Arcs missing from the JSON default to 0.
    pub fn from_json(g: &Digraph, js: &SolutionJson) -> Result<Self, LpError> {
        if js.y.len() != g.n() {
            return Err(LpError::Shape(format!("{} Y values for {} vertices", js.y.len(), g.n())));
        }
        let y = js.y.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?;
        let mut x = vec![BigRational::zero(); g.m()];
        for av in &js.x {
            let id = g.arc_id(av.arc[0], av.arc[1]).ok_or_else(|| LpError::Shape(format!("arc {:?} not in graph", av.arc)))?;
            x[id] = parse_rational(&av.value)?;
        }
        Ok(FractionalSolution { y, x })
    }

    pub fn to_json(&self, g: &Digraph) -> SolutionJson {
        SolutionJson {
            y: self.y.iter().map(ToString::to_string).collect(),
            x: g.arcs().iter().zip(&self.x).map(|(&(u, v), val)| ArcValue { arc: [u, v], value: val.to_string() }).collect(),
        }
    }

    /// Indicator vector of a tree.
    pub fn characteristic(g: &Digraph, t: &DirBinaryTree) -> Self {
        let mut y = vec![BigRational::zero(); g.n()];
        for v in t.vertices() {
            y[v] = BigRational::one();
        }
        let mut x = vec![BigRational::zero(); g.m()];
        for &(u, v) in &t.arcs {
            if let Some(id) = g.arc_id(u, v) {
                x[id] = BigRational::one();
            }
        }
        FractionalSolution { y, x }
    }

    pub fn objective(&self) -> BigRational {
        self.y.iter().fold(BigRational::zero(), |a, b| a + b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintCounts {
    pub in_degree: usize,
    pub out_degree: usize,
    pub cut: u128,
}

/// In-degree rows for all n vertices, out-degree rows for n − 1, and one cut
/// row per (S, u) with u ∈ S ⊆ V∖{r}: (n − 1)·2^(n − 2) of them.
pub fn constraint_counts(n: usize) -> ConstraintCounts {
    let cut = if n < 2 { 0 } else { (n as u128 - 1) << (n - 2) };
    ConstraintCounts { in_degree: n, out_degree: n.saturating_sub(1), cut }
}

fn x_name(u: usize, v: usize) -> String {
    format!("x{u}_{v}")
}

fn sum_terms(names: impl IntoIterator<Item = String>) -> String {
    names.into_iter().collect::<Vec<_>>().join(" + ")
}

/// LP-file text: Maximize / Subject To / Bounds / [Generals] / End.
pub fn emit_lp(g: &Digraph, r: usize, integer: bool) -> Result<String, LpError> {
    let n = g.n();
    if r >= n {
        return Err(LpError::VertexOutOfRange(r));
    }
    if n > EMIT_CAP {
        return Err(LpError::TooLarge { n, cap: EMIT_CAP, cuts: constraint_counts(n).cut });
    }
    let mut s = String::new();
    let _ = writeln!(s, "\\ rooted maximum binary tree, root {r}, {n} vertices, {} arcs", g.m());
    s.push_str("Maximize\n");
    let _ = writeln!(s, " obj: {}", sum_terms((0..n).map(|v| format!("y{v}"))));
    s.push_str("Subject To\n");
    let arc_sum = |arcs: Vec<(usize, usize)>| -> String {
        if arcs.is_empty() {
            String::new()
        } else {
            sum_terms(arcs.into_iter().map(|(a, b)| x_name(a, b))) + " "
        }
    };
    for u in 0..n {
        let ins = g.in_neighbors(u).iter().map(|&w| (w, u)).collect();
        let _ = writeln!(s, " in_{u}: {}- 2 y{u} <= 0", arc_sum(ins));
    }
    for u in (0..n).filter(|&u| u != r) {
        let outs = g.out_neighbors(u).iter().map(|&w| (u, w)).collect();
        let _ = writeln!(s, " out_{u}: {}- y{u} = 0", arc_sum(outs));
    }
    let others: Vec<usize> = (0..n).filter(|&v| v != r).collect();
    for mask in 1u64..(1u64 << others.len()) {
        let inside = |v: usize| v != r && others.iter().position(|&o| o == v).is_some_and(|i| mask >> i & 1 == 1);
        let leaving: Vec<(usize, usize)> = g.arcs().iter().copied().filter(|&(a, b)| inside(a) && !inside(b)).collect();
        let lhs = arc_sum(leaving);
        for (i, &u) in others.iter().enumerate() {
            if mask >> i & 1 == 1 {
                let _ = writeln!(s, " cut_{mask}_{u}: {lhs}- y{u} >= 0");
            }
        }
    }
    s.push_str("Bounds\n");
    for v in 0..n {
        let _ = writeln!(s, " 0 <= y{v} <= 1");
    }
    for &(a, b) in g.arcs() {
        let _ = writeln!(s, " 0 <= {} <= 1", x_name(a, b));
    }
    if integer {
        s.push_str("Generals\n");
        let names: Vec<String> = (0..n).map(|v| format!("y{v}")).chain(g.arcs().iter().map(|&(a, b)| x_name(a, b))).collect();
        let _ = writeln!(s, " {}", names.join(" "));
    }
    s.push_str("End\n");
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    InDegree { u: usize, lhs: String, rhs: String },
    OutDegree { u: usize, lhs: String, rhs: String },
    /// `set` is a minimum cut separating u from the root.
    Cut { u: usize, set: Vec<usize>, capacity: String, y: String },
    VertexBound { u: usize, value: String },
    ArcBound { arc: [usize; 2], value: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub objective: String,
    pub violations: Vec<Violation>,
}

fn in_unit(q: &BigRational) -> bool {
    !q.is_negative() && *q <= BigRational::one()
}

/// Exact max-flow from `src` to `sink` (shortest augmenting paths), stopping
/// once `enough` is reached. Returns the flow value and the source side of
/// the residual graph.
pub fn max_flow(g: &Digraph, cap: &[BigRational], src: usize, sink: usize, enough: Option<&BigRational>) -> (BigRational, Vec<usize>) {
    let n = g.n();
    let mut flow = vec![BigRational::zero(); g.m()];
    let mut total = BigRational::zero();
    let mut out_ids: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut in_ids: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, &(a, b)) in g.arcs().iter().enumerate() {
        out_ids[a].push(id);
        in_ids[b].push(id);
    }
    loop {
        if enough.is_some_and(|e| total >= *e) {
            break;
        }
        // BFS over residual arcs; prev holds (arc id, forward?)
        let mut prev: Vec<Option<(usize, bool)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for &id in &out_ids[v] {
                let w = g.arcs()[id].1;
                if !seen[w] && flow[id] < cap[id] {
                    seen[w] = true;
                    prev[w] = Some((id, true));
                    queue.push_back(w);
                }
            }
            for &id in &in_ids[v] {
                let w = g.arcs()[id].0;
                if !seen[w] && flow[id].is_positive() {
                    seen[w] = true;
                    prev[w] = Some((id, false));
                    queue.push_back(w);
                }
            }
        }
        if !seen[sink] {
            return (total, (0..n).filter(|&v| seen[v]).collect());
        }
        let mut path = Vec::new();
        let mut v = sink;
        while v != src {
            let (id, fwd) = prev[v].expect("path reaches the source");
            path.push((id, fwd));
            v = if fwd { g.arcs()[id].0 } else { g.arcs()[id].1 };
        }
        let bottleneck = path
            .iter()
            .map(|&(id, fwd)| if fwd { &cap[id] - &flow[id] } else { flow[id].clone() })
            .min()
            .expect("nonempty path");
        for &(id, fwd) in &path {
            if fwd {
                flow[id] += &bottleneck;
            } else {
                flow[id] -= &bottleneck;
            }
        }
        total += bottleneck;
    }
    (total, Vec::new())
}

/// Checks in/out-degree rows and bounds directly, and each cut family through
/// a u→r max-flow under capacities X.
pub fn verify_fractional(g: &Digraph, r: usize, sol: &FractionalSolution) -> Result<FeasibilityReport, LpError> {
    let n = g.n();
    if r >= n {
        return Err(LpError::VertexOutOfRange(r));
    }
    if sol.y.len() != n || sol.x.len() != g.m() {
        return Err(LpError::Shape(format!("expected {} Y and {} X values", n, g.m())));
    }
    let mut violations = Vec::new();
    for (u, y) in sol.y.iter().enumerate() {
        if !in_unit(y) {
            violations.push(Violation::VertexBound { u, value: y.to_string() });
        }
    }
    for (&(a, b), x) in g.arcs().iter().zip(&sol.x) {
        if !in_unit(x) {
            violations.push(Violation::ArcBound { arc: [a, b], value: x.to_string() });
        }
    }
    let arc_val = |a: usize, b: usize| &sol.x[g.arc_id(a, b).expect("listed arc")];
    for u in 0..n {
        let lhs: BigRational = g.in_neighbors(u).iter().map(|&w| arc_val(w, u)).sum();
        let rhs = &sol.y[u] * BigRational::from_integer(2.into());
        if lhs > rhs {
            violations.push(Violation::InDegree { u, lhs: lhs.to_string(), rhs: rhs.to_string() });
        }
    }
    for u in (0..n).filter(|&u| u != r) {
        let lhs: BigRational = g.out_neighbors(u).iter().map(|&w| arc_val(u, w)).sum();
        if lhs != sol.y[u] {
            violations.push(Violation::OutDegree { u, lhs: lhs.to_string(), rhs: sol.y[u].to_string() });
        }
    }
    // negative capacities would break the flow; bounds already report them
    let cap: Vec<BigRational> = sol.x.iter().map(|x| if x.is_negative() { BigRational::zero() } else { x.clone() }).collect();
    for u in (0..n).filter(|&u| u != r && sol.y[u].is_positive()) {
        let (value, side) = max_flow(g, &cap, u, r, Some(&sol.y[u]));
        if value < sol.y[u] {
            let capacity: BigRational = g
                .arcs()
                .iter()
                .zip(&cap)
                .filter(|(&(a, b), _)| side.contains(&a) && !side.contains(&b))
                .map(|(_, c)| c.clone())
                .sum();
            violations.push(Violation::Cut { u, set: side, capacity: capacity.to_string(), y: sol.y[u].to_string() });
        }
    }
    Ok(FeasibilityReport { feasible: violations.is_empty(), objective: sol.objective().to_string(), violations })
}

/// Vertices u whose cut family has a violated member, by enumerating every
/// S ⊆ V∖{r}. Exponential; the cross-check for the flow-based test.
pub fn cut_violations_by_enumeration(g: &Digraph, r: usize, sol: &FractionalSolution) -> Vec<usize> {
    let others: Vec<usize> = (0..g.n()).filter(|&v| v != r).collect();
    let mut bad = vec![false; g.n()];
    for mask in 1u64..(1u64 << others.len()) {
        let mut inside = vec![false; g.n()];
        for (i, &v) in others.iter().enumerate() {
            inside[v] = mask >> i & 1 == 1;
        }
        let leaving: BigRational = g.arcs().iter().zip(&sol.x).filter(|(&(a, b), _)| inside[a] && !inside[b]).map(|(_, x)| x.clone()).sum();
        for &u in others.iter().filter(|&&u| inside[u]) {
            if leaving < sol.y[u] {
                bad[u] = true;
            }
        }
    }
    (0..g.n()).filter(|&u| bad[u]).collect()
}

/// ΣY / OPT for a verified point: an exact lower bound on this instance's gap.
pub fn integrality_gap_report(g: &Digraph, r: usize, sol: &FractionalSolution, oracle_opt: usize) -> Result<BigRational, LpError> {
    let report = verify_fractional(g, r, sol)?;
    if !report.feasible {
        return Err(LpError::Infeasible(report.violations.len()));
    }
    if oracle_opt == 0 {
        return Err(LpError::ZeroOptimum);
    }
    Ok(sol.objective() / BigRational::from_integer(oracle_opt.into()))
}

fn pow(base: u32, e: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(base).pow(e))
}

/// IP-OPT(k) = 4·IP-OPT(k−1) + 7, IP-OPT(1) = 0.
pub fn ip_opt_recurrence(k: u32) -> BigRational {
    (1..k).fold(BigRational::zero(), |acc, _| acc * pow(4, 1) + pow(7, 1))
}

/// (7/3)(4^(k−1) − 1).
pub fn ip_opt_closed(k: u32) -> BigRational {
    rational(7, 3) * (pow(4, k - 1) - BigRational::one())
}

/// LP-obj(k) = 8·LP-obj(k−1) + 14, LP-obj(1) = 0.
pub fn lp_obj_recurrence(k: u32) -> BigRational {
    (1..k).fold(BigRational::zero(), |acc, _| acc * pow(8, 1) + pow(14, 1))
}

/// 2(8^(k−1) − 1).
pub fn lp_obj_closed(k: u32) -> BigRational {
    BigRational::from_integer(2.into()) * (pow(8, k - 1) - BigRational::one())
}

/// V_k = 8·V_(k−1) + 13, V_1 = 1.
pub fn gap_vertices_recurrence(k: u32) -> BigRational {
    (1..k).fold(BigRational::one(), |acc, _| acc * pow(8, 1) + pow(13, 1))
}

/// The published closed form (13/7)(8^(k−1) − 1); disagrees with the recurrence.
pub fn gap_vertices_closed(k: u32) -> BigRational {
    rational(13, 7) * (pow(8, k - 1) - BigRational::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_arc() -> Digraph {
        Digraph::new(2, [(1, 0)]).unwrap()
    }

    #[test]
    fn emit_single_arc() {
        let text = emit_lp(&single_arc(), 0, false).unwrap();
        assert_eq!(text.matches(" cut_").count(), 1);
        assert!(text.contains(" cut_1_1: x1_0 - y1 >= 0"));
        assert!(text.contains(" out_1: x1_0 - y1 = 0"));
        assert!(!text.contains("Generals"));
        let int = emit_lp(&single_arc(), 0, true).unwrap();
        assert!(int.contains("Generals\n y0 y1 x1_0\n"));
        assert_eq!(int.replace("Generals\n y0 y1 x1_0\n", ""), text);
    }

    #[test]
    fn emit_counts_and_cap() {
        let tri = Digraph::new(3, [(1, 0), (2, 0), (2, 1)]).unwrap();
        let text = emit_lp(&tri, 0, false).unwrap();
        let c = constraint_counts(3);
        assert_eq!(text.matches(" cut_").count() as u128, c.cut);
        assert_eq!(text.matches(" in_").count(), c.in_degree);
        assert_eq!(text.matches(" out_").count(), c.out_degree);
        assert!(matches!(emit_lp(&Digraph::empty(21), 0, false), Err(LpError::TooLarge { n: 21, .. })));
    }

    #[test]
    fn verify_examples() {
        let g = single_arc();
        let zero = FractionalSolution { y: vec![BigRational::zero(), BigRational::one()], x: vec![BigRational::zero()] };
        let rep = verify_fractional(&g, 0, &zero).unwrap();
        assert!(rep.violations.iter().any(|v| matches!(v, Violation::Cut { u: 1, set, .. } if set == &vec![1])));
        let half = FractionalSolution { y: vec![BigRational::one(), rational(1, 2)], x: vec![rational(1, 2)] };
        let rep = verify_fractional(&g, 0, &half).unwrap();
        assert!(rep.feasible, "{rep:?}");
        assert_eq!(rep.objective, "3/2");
    }

    #[test]
    fn characteristic_vector_feasible() {
        let g = Digraph::new(4, [(1, 0), (2, 0), (3, 1), (3, 2)]).unwrap();
        let t = DirBinaryTree { root: 0, arcs: vec![(1, 0), (2, 0), (3, 1)] };
        let sol = FractionalSolution::characteristic(&g, &t);
        assert!(verify_fractional(&g, 0, &sol).unwrap().feasible);
        assert_eq!(integrality_gap_report(&g, 0, &sol, 4).unwrap(), BigRational::one());
    }

    #[test]
    fn reference_evaluators() {
        assert_eq!(ip_opt_recurrence(2), rational(7, 1));
        assert_eq!(lp_obj_recurrence(2), rational(14, 1));
        for k in 1..8 {
            assert_eq!(ip_opt_recurrence(k), ip_opt_closed(k));
            assert_eq!(lp_obj_recurrence(k), lp_obj_closed(k));
        }
        assert_eq!(gap_vertices_recurrence(2), rational(21, 1));
        assert_eq!(gap_vertices_closed(2), rational(13, 1));
    }

    #[test]
    fn json_round_trip() {
        let g = single_arc();
        let sol = FractionalSolution { y: vec![BigRational::one(), rational(1, 2)], x: vec![rational(1, 2)] };
        let js = serde_json::to_string(&sol.to_json(&g)).unwrap();
        let back: SolutionJson = serde_json::from_str(&js).unwrap();
        assert_eq!(FractionalSolution::from_json(&g, &back).unwrap(), sol);
        assert!(parse_rational("x/2").is_err());
    }
}
