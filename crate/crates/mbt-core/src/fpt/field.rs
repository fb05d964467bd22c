//! Binary extension fields GF(2^ℓ) for ℓ ∈ {8, 16, 32, 64}.

use rand::Rng;
use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

// characteristic 2: addition is XOR
#[allow(clippy::suspicious_arithmetic_impl)]
impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl std::ops::AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("unsupported field size 2^{0}; use 8, 16, 32 or 64 bits")]
    UnsupportedBits(u32),
}

/// Arithmetic context: the modulus is x^ℓ + `low`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Field {
    bits: u32,
    low: u64,
}

impl Default for Field {
    fn default() -> Self {
        Field::gf2_64()
    }
}

impl Field {
    pub fn new(bits: u32) -> Result<Field, FieldError> {
        let low = match bits {
            8 => 0x1B,
            16 => 0x2B,
            32 => 0x8D,
            64 => 0x1B,
            _ => return Err(FieldError::UnsupportedBits(bits)),
        };
        Ok(Field { bits, low })
    }

    /// x^64 + x^4 + x^3 + x + 1.
    pub fn gf2_64() -> Field {
        Field { bits: 64, low: 0x1B }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    fn mask(&self) -> u64 {
        if self.bits == 64 { u64::MAX } else { (1u64 << self.bits) - 1 }
    }

    /// Modulus as a polynomial over GF(2), bit i = coefficient of x^i.
    pub fn modulus(&self) -> u128 {
        (1u128 << self.bits) | self.low as u128
    }

    pub fn element(&self, v: u64) -> FieldElement {
        FieldElement(v & self.mask())
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let mut p = clmul(a.0, b.0);
        let bits = self.bits;
        loop {
            let hi = p >> bits;
            if hi == 0 {
                return FieldElement(p as u64);
            }
            p = (p & self.mask() as u128) ^ clmul(hi as u64, self.low) ^ (clmul((hi >> 64) as u64, self.low) << 64);
        }
    }

    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElement, mut e: u128) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via a^(2^ℓ - 2); zero maps to zero.
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        self.pow(a, (1u128 << self.bits) - 2)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        self.element(rng.gen())
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// Rabin's test. ℓ is a power of two, so 2 is its only prime divisor.
    pub fn modulus_is_irreducible(&self) -> bool {
        let x = FieldElement(2);
        let frob = |times: u32| (0..times).fold(x, |acc, _| self.square(acc));
        if frob(self.bits) != x {
            return false;
        }
        let h = frob(self.bits / 2).0 ^ 2;
        poly_gcd(h as u128, self.modulus()) == 1
    }
}

fn poly_deg(p: u128) -> i32 {
    127 - p.leading_zeros() as i32
}

fn poly_mod(mut a: u128, b: u128) -> u128 {
    let db = poly_deg(b);
    while a != 0 && poly_deg(a) >= db {
        a ^= b << (poly_deg(a) - db);
    }
    a
}

fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_mod(a, b);
        a = b;
        b = r;
    }
    a
}

/// Carry-less 64x64 -> 128 multiplication.
pub fn clmul(a: u64, b: u64) -> u128 {
    #[cfg(target_arch = "x86_64")]
    {
        if std::is_x86_feature_detected!("pclmulqdq") && std::is_x86_feature_detected!("sse2") {
            // SAFETY: the required CPU features were detected at runtime.
            return unsafe { clmul_hw(a, b) };
        }
    }
    clmul_soft(a, b)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq,sse2")]
unsafe fn clmul_hw(a: u64, b: u64) -> u128 {
    use std::arch::x86_64::*;
    let x = _mm_set_epi64x(0, a as i64);
    let y = _mm_set_epi64x(0, b as i64);
    let r = _mm_clmulepi64_si128(x, y, 0x00);
    let lo = _mm_cvtsi128_si64(r) as u64;
    let hi = _mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)) as u64;
    (hi as u128) << 64 | lo as u128
}

pub fn clmul_soft(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let a = a as u128;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}
