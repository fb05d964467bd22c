//! Exact sum-of-products expansion of small circuits. Test oracle only.

use std::collections::BTreeMap;

use super::circuit::{Circuit, Gate};
use super::field::{Field, FieldElement};
use super::FptError;

pub const MAX_VARS: usize = 7;
pub const MAX_DEGREE: u32 = 6;
pub const MAX_TERMS: usize = 200_000;

/// Coefficient ring for expansion.
pub trait Coefficients {
    type Elem: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn lift(&self, c: FieldElement) -> Self::Elem;
}

impl Coefficients for Field {
    type Elem = FieldElement;
    fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }
    fn is_zero(&self, a: &FieldElement) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        *a + *b
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        Field::mul(self, *a, *b)
    }
    fn lift(&self, c: FieldElement) -> FieldElement {
        c
    }
}

/// Integer arithmetic; a scalar constant is read as the integer with the same bits.
#[derive(Clone, Copy, Debug, Default)]
pub struct IntegerLift;

impl Coefficients for IntegerLift {
    type Elem = i128;
    fn zero(&self) -> i128 {
        0
    }
    fn is_zero(&self, a: &i128) -> bool {
        *a == 0
    }
    fn add(&self, a: &i128, b: &i128) -> i128 {
        a + b
    }
    fn mul(&self, a: &i128, b: &i128) -> i128 {
        a * b
    }
    fn lift(&self, c: FieldElement) -> i128 {
        c.0 as i128
    }
}

/// Exponent vector indexed by variable.
pub type Monomial = Vec<u8>;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<E> {
    pub num_vars: usize,
    pub terms: BTreeMap<Monomial, E>,
}

impl<E: Clone> Polynomial<E> {
    pub fn coefficient(&self, m: &[u8]) -> Option<&E> {
        self.terms.get(m)
    }

    pub fn multilinear_terms(&self) -> impl Iterator<Item = (&Monomial, &E)> {
        self.terms.iter().filter(|(m, _)| m.iter().all(|&e| e <= 1))
    }

    pub fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.keys().map(|m| m.iter().map(|&e| e as u32).sum())
    }
}

/// Monomial with the given variables at exponent one (repeats add up).
pub fn monomial(num_vars: usize, vars: &[usize]) -> Monomial {
    let mut m = vec![0u8; num_vars];
    for &v in vars {
        m[v] += 1;
    }
    m
}

pub fn expand_symbolic<R: Coefficients>(c: &Circuit, ring: &R) -> Result<Polynomial<R::Elem>, FptError> {
    if c.num_vars() > MAX_VARS {
        return Err(FptError::ExpansionTooLarge(format!("{} variables, cap {MAX_VARS}", c.num_vars())));
    }
    if c.max_gate_degree() > MAX_DEGREE {
        return Err(FptError::ExpansionTooLarge(format!("degree {}, cap {MAX_DEGREE}", c.max_gate_degree())));
    }
    let nv = c.num_vars();
    let mut vals: Vec<BTreeMap<Monomial, R::Elem>> = Vec::with_capacity(c.len());
    for gate in c.gates() {
        let mut out: BTreeMap<Monomial, R::Elem> = BTreeMap::new();
        let acc = |out: &mut BTreeMap<Monomial, R::Elem>, m: Monomial, e: R::Elem| {
            let cur = out.entry(m).or_insert_with(|| ring.zero());
            *cur = ring.add(cur, &e);
        };
        match gate {
            Gate::Input(v) => {
                out.insert(monomial(nv, &[*v]), ring.lift(FieldElement::ONE));
            }
            Gate::Add(children) => {
                for &ch in children {
                    for (m, e) in &vals[ch] {
                        acc(&mut out, m.clone(), e.clone());
                    }
                }
            }
            Gate::Mul(a, b) => {
                for (ma, ea) in &vals[*a] {
                    for (mb, eb) in &vals[*b] {
                        let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                        acc(&mut out, m, ring.mul(ea, eb));
                    }
                }
            }
            Gate::Scale(a, s) => {
                let s = ring.lift(*s);
                for (m, e) in &vals[*a] {
                    acc(&mut out, m.clone(), ring.mul(e, &s));
                }
            }
        }
        out.retain(|_, e| !ring.is_zero(e));
        if out.len() > MAX_TERMS {
            return Err(FptError::ExpansionTooLarge(format!("more than {MAX_TERMS} terms")));
        }
        vals.push(out);
    }
    let terms = vals.swap_remove(c.output());
    Ok(Polynomial { num_vars: nv, terms })
}
