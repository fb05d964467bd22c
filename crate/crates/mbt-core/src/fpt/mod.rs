//! Randomized 2^k-style detection of k-vertex binary trees in digraphs.
//!
//! Trees rooted at v with j vertices are encoded by the polynomial P_v^(j);
//! a multilinear monomial of y·Σ_v P_v^(k) exists iff some k-vertex binary
//! tree exists. Detection evaluates the circuit over GF(2^ℓ)[Z₂^(k+1)], where
//! squares of substituted variables vanish.

pub mod circuit;
pub mod detect;
pub mod field;
pub mod group_algebra;
pub mod symbolic;

use thiserror::Error;

pub use circuit::{build_circuit, build_mbt_circuit, build_rooted_circuit, Circuit, Gate, GateId, MbtCircuit};
pub use detect::{decide_k_binary_tree, detect_multilinear, evaluate, search_k_binary_tree, trial_count, FptOptions};
pub use field::{Field, FieldElement};
pub use group_algebra::{GroupAlgebraElement, TBasis};
pub use symbolic::{expand_symbolic, monomial, IntegerLift, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FptError {
    #[error("k must be at least 1")]
    KTooSmall,
    #[error("k = {k} exceeds the configured cap {cap}")]
    KTooLarge { k: usize, cap: usize },
    #[error("gate {gate} has degree {degree}, above the bound {bound}")]
    DegreeOverflow { gate: usize, degree: u32, bound: u32 },
    #[error("expected {expected} arc fingerprints, got {got}")]
    FingerprintCount { expected: usize, got: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("symbolic expansion refused: {0}")]
    ExpansionTooLarge(String),
    #[error("search ended without a valid tree (a randomized call failed)")]
    SearchFailed,
}
