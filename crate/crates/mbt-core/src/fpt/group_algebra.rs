//! The group algebra GF(2^ℓ)[Z₂^d].
//!
//! `GroupAlgebraElement` stores coefficients on group elements and multiplies
//! by XOR-convolution. `TBasis` is the same algebra written in the basis
//! t_A = Π_{i∈A}(e₀ + e_{u_i}) (u_i the unit vectors), where the product is
//! the disjoint-subset convolution. Both agree through `to_t_basis` /
//! `TBasis::to_standard`; the evaluator uses `TBasis` because it skips low-degree
//! coefficients known to vanish.

use super::field::{Field, FieldElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    dim: u32,
    coeffs: Vec<FieldElement>,
}

impl GroupAlgebraElement {
    pub fn zero(dim: u32) -> Self {
        GroupAlgebraElement { dim, coeffs: vec![FieldElement::ZERO; 1 << dim] }
    }

    /// The group element e_v.
    pub fn basis(dim: u32, v: usize) -> Self {
        let mut z = Self::zero(dim);
        z.coeffs[v] = FieldElement::ONE;
        z
    }

    pub fn from_coeffs(dim: u32, coeffs: Vec<FieldElement>) -> Self {
        assert_eq!(coeffs.len(), 1 << dim, "coefficient vector has wrong length");
        GroupAlgebraElement { dim, coeffs }
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| a + b).collect();
        GroupAlgebraElement { dim: self.dim, coeffs }
    }

    pub fn scale(&self, f: &Field, s: FieldElement) -> Self {
        GroupAlgebraElement { dim: self.dim, coeffs: self.coeffs.iter().map(|&c| f.mul(c, s)).collect() }
    }

    /// Reference XOR-convolution, 4^d field products.
    pub fn mul(&self, f: &Field, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for (u, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (v, &b) in other.coeffs.iter().enumerate() {
                out.coeffs[u ^ v] += f.mul(a, b);
            }
        }
        out
    }

    pub fn to_t_basis(&self) -> TBasis {
        TBasis { dim: self.dim, coeffs: superset_sum(self.coeffs.clone(), self.dim), min_degree: 0 }
    }
}

/// Sum over supersets. In characteristic 2 this map is its own inverse.
fn superset_sum(mut c: Vec<FieldElement>, dim: u32) -> Vec<FieldElement> {
    for i in 0..dim {
        let bit = 1usize << i;
        for s in 0..c.len() {
            if s & bit == 0 {
                let hi = c[s | bit];
                c[s] += hi;
            }
        }
    }
    c
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TBasis {
    dim: u32,
    coeffs: Vec<FieldElement>,
    /// Every coefficient on a set smaller than this is zero.
    min_degree: u32,
}

impl TBasis {
    pub fn zero(dim: u32) -> Self {
        TBasis { dim, coeffs: vec![FieldElement::ZERO; 1 << dim], min_degree: dim + 1 }
    }

    /// Image of r·(e₀ + e_v): r times the sum of t_A over nonempty A ⊆ v.
    pub fn substituted_input(dim: u32, v: usize, r: FieldElement) -> Self {
        let mut z = Self::zero(dim);
        let mut a = v;
        while a != 0 {
            z.coeffs[a] = r;
            a = (a - 1) & v;
        }
        z.min_degree = 1;
        z
    }

    pub fn from_standard(g: &GroupAlgebraElement) -> Self {
        g.to_t_basis()
    }

    pub fn to_standard(&self) -> GroupAlgebraElement {
        GroupAlgebraElement { dim: self.dim, coeffs: superset_sum(self.coeffs.clone(), self.dim) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| a + b).collect();
        TBasis { dim: self.dim, coeffs, min_degree: self.min_degree.min(other.min_degree) }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        self.min_degree = self.min_degree.min(other.min_degree);
    }

    pub fn scale(&self, f: &Field, s: FieldElement) -> Self {
        TBasis { dim: self.dim, coeffs: self.coeffs.iter().map(|&c| f.mul(c, s)).collect(), min_degree: self.min_degree }
    }

    /// Disjoint-subset convolution: (a·b)[S] = Σ_{A ⊆ S} a[A]·b[S∖A].
    pub fn mul(&self, f: &Field, other: &Self) -> Self {
        let dim = self.dim;
        let (da, db) = (self.min_degree, other.min_degree);
        let mut out = TBasis::zero(dim);
        out.min_degree = da.saturating_add(db);
        if out.min_degree > dim {
            return out;
        }
        for s in 0..self.coeffs.len() {
            let size = s.count_ones();
            if size < da + db {
                continue;
            }
            let mut acc = FieldElement::ZERO;
            let mut a = s;
            loop {
                let ca = a.count_ones();
                if ca >= da && size - ca >= db {
                    let x = self.coeffs[a];
                    if !x.is_zero() {
                        let y = other.coeffs[s & !a];
                        if !y.is_zero() {
                            acc += f.mul(x, y);
                        }
                    }
                }
                if a == 0 {
                    break;
                }
                a = (a - 1) & s;
            }
            out.coeffs[s] = acc;
        }
        out
    }
}
