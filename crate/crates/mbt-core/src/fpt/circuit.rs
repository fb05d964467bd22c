//! Arithmetic circuits and the tree-generating polynomial builder.

use super::field::FieldElement;
use super::FptError;
use crate::graph::Digraph;

pub type GateId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    Input(usize),
    /// Unbounded fan-in; empty means the zero polynomial.
    Add(Vec<GateId>),
    Mul(GateId, GateId),
    Scale(GateId, FieldElement),
}

/// Gates in topological order with per-gate degree bounds. A gate whose
/// polynomial is identically zero by construction has `min > max`.
#[derive(Clone, Debug)]
pub struct Circuit {
    num_vars: usize,
    gates: Vec<Gate>,
    min_deg: Vec<u32>,
    max_deg: Vec<u32>,
    output: GateId,
}

const ZERO_MIN: u32 = u32::MAX;

impl Circuit {
    pub fn new(num_vars: usize) -> Self {
        Circuit { num_vars, gates: Vec::new(), min_deg: Vec::new(), max_deg: Vec::new(), output: 0 }
    }

    fn push(&mut self, gate: Gate, lo: u32, hi: u32) -> GateId {
        self.gates.push(gate);
        self.min_deg.push(lo);
        self.max_deg.push(hi);
        self.output = self.gates.len() - 1;
        self.output
    }

    pub fn input(&mut self, var: usize) -> GateId {
        assert!(var < self.num_vars, "variable {var} out of range");
        self.push(Gate::Input(var), 1, 1)
    }

    pub fn add(&mut self, children: Vec<GateId>) -> GateId {
        let lo = children.iter().map(|&c| self.min_deg[c]).min().unwrap_or(ZERO_MIN);
        let hi = children.iter().map(|&c| self.max_deg[c]).max().unwrap_or(0);
        self.push(Gate::Add(children), lo, hi)
    }

    pub fn mul(&mut self, a: GateId, b: GateId) -> GateId {
        let (lo, hi) = if self.is_zero_gate(a) || self.is_zero_gate(b) {
            (ZERO_MIN, 0)
        } else {
            (self.min_deg[a] + self.min_deg[b], self.max_deg[a] + self.max_deg[b])
        };
        self.push(Gate::Mul(a, b), lo, hi)
    }

    pub fn scale(&mut self, a: GateId, c: FieldElement) -> GateId {
        let (lo, hi) = (self.min_deg[a], self.max_deg[a]);
        self.push(Gate::Scale(a, c), lo, hi)
    }

    pub fn set_output(&mut self, g: GateId) {
        self.output = g;
    }

    pub fn output(&self) -> GateId {
        self.output
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    fn is_zero_gate(&self, g: GateId) -> bool {
        self.min_deg[g] > self.max_deg[g]
    }

    /// Degree interval of gate `g`, or `None` for a structurally zero gate.
    pub fn degree_range(&self, g: GateId) -> Option<(u32, u32)> {
        (!self.is_zero_gate(g)).then(|| (self.min_deg[g], self.max_deg[g]))
    }

    pub fn max_gate_degree(&self) -> u32 {
        self.max_deg.iter().copied().max().unwrap_or(0)
    }

    /// Fails on the first gate whose degree exceeds `bound`.
    pub fn check_degree(&self, bound: u32) -> Result<(), FptError> {
        match self.max_deg.iter().position(|&d| d > bound) {
            Some(gate) => Err(FptError::DegreeOverflow { gate, degree: self.max_deg[gate], bound }),
            None => Ok(()),
        }
    }
}

/// Circuit for y·Σ_v P_v^(k) together with the gate of every P_v^(j).
#[derive(Clone, Debug)]
pub struct MbtCircuit {
    pub circuit: Circuit,
    /// `p[v][j - 1]` is the gate of P_v^(j).
    pub p: Vec<Vec<GateId>>,
    pub y: GateId,
}

/// Variable index of x_v is v; y is variable n. `fingerprints[i]` scales arc i of `g`.
pub fn build_circuit(g: &Digraph, k: usize, fingerprints: &[FieldElement]) -> Result<Circuit, FptError> {
    let mut mc = build_mbt_circuit(g, k, fingerprints)?;
    let tops: Vec<GateId> = mc.p.iter().map(|ps| ps[k - 1]).collect();
    let sum = mc.circuit.add(tops);
    let out = mc.circuit.mul(mc.y, sum);
    mc.circuit.set_output(out);
    Ok(mc.circuit)
}

/// y·P_root^(k): the polynomial of trees rooted at `root`.
pub fn build_rooted_circuit(g: &Digraph, k: usize, root: usize, fingerprints: &[FieldElement]) -> Result<Circuit, FptError> {
    if root >= g.n() {
        return Err(FptError::VertexOutOfRange(root));
    }
    let mut mc = build_mbt_circuit(g, k, fingerprints)?;
    let out = mc.circuit.mul(mc.y, mc.p[root][k - 1]);
    mc.circuit.set_output(out);
    Ok(mc.circuit)
}

/// P_v^(j) = x_v·( Σ_u ρ_uv P_u^(j-1) + Σ_{a<b, a+b=j-1} S_v^(a)·S_v^(b)
///                 + Σ_{u<w} ρ_uv ρ_wv P_u^(h) P_w^(h) [when j-1 = 2h] )
/// with S_v^(a) = Σ_u ρ_uv P_u^(a). Each unordered child pair appears once.
/// The S·S products also contain u = w terms; those repeat x_u and are never
/// multilinear, so they cannot affect detection.
pub fn build_mbt_circuit(g: &Digraph, k: usize, fingerprints: &[FieldElement]) -> Result<MbtCircuit, FptError> {
    if k < 1 {
        return Err(FptError::KTooSmall);
    }
    if fingerprints.len() != g.m() {
        return Err(FptError::FingerprintCount { expected: g.m(), got: fingerprints.len() });
    }
    let n = g.n();
    let mut c = Circuit::new(n + 1);
    let x: Vec<GateId> = (0..n).map(|v| c.input(v)).collect();
    let y = c.input(n);
    let mut ypow = vec![y, y];
    for p in 2..k {
        let prev = ypow[p - 1];
        ypow.push(c.mul(prev, y));
    }
    let ins: Vec<Vec<(usize, FieldElement)>> = (0..n)
        .map(|v| {
            let mut list: Vec<(usize, FieldElement)> = g
                .in_neighbors(v)
                .iter()
                .map(|&u| (u, fingerprints[g.arc_id(u, v).expect("in-neighbour arc exists")]))
                .collect();
            list.sort_unstable_by_key(|&(u, _)| u);
            list
        })
        .collect();

    let mut p: Vec<Vec<GateId>> = x.iter().map(|&xv| vec![xv]).collect();
    // scaled[v][a-1][i] = ρ_{u_i v}·P_{u_i}^(a); s[v][a-1] their sum
    let mut scaled: Vec<Vec<Vec<GateId>>> = vec![Vec::new(); n];
    let mut s: Vec<Vec<GateId>> = vec![Vec::new(); n];
    for j in 2..=k {
        let a = j - 1;
        for v in 0..n {
            let terms: Vec<GateId> = ins[v].iter().map(|&(u, rho)| c.scale(p[u][a - 1], rho)).collect();
            s[v].push(c.add(terms.clone()));
            scaled[v].push(terms);
        }
        for v in 0..n {
            let gate = if ins[v].is_empty() {
                c.mul(x[v], ypow[j - 1])
            } else {
                let mut terms = vec![s[v][j - 2]];
                for a in 1..=(j - 1) / 2 {
                    let b = j - 1 - a;
                    if a < b {
                        terms.push(c.mul(s[v][a - 1], s[v][b - 1]));
                    } else {
                        let sc = scaled[v][a - 1].clone();
                        let mut prefix = sc[0];
                        for &term in &sc[1..] {
                            terms.push(c.mul(term, prefix));
                            prefix = c.add(vec![prefix, term]);
                        }
                    }
                }
                let q = c.add(terms);
                c.mul(x[v], q)
            };
            p[v].push(gate);
        }
    }
    Ok(MbtCircuit { circuit: c, p, y })
}
