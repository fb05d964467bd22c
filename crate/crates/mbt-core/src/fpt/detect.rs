//! Randomized multilinear-term detection and the k-tree decision/search built on it.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::circuit::{build_circuit, Circuit, Gate};
use super::field::{Field, FieldElement};
use super::group_algebra::TBasis;
use super::FptError;
use crate::graph::{rng_from_seed, validate_dir_tree, Digraph, DirBinaryTree};

pub const DEFAULT_K_CAP: usize = 10;

#[derive(Clone, Copy, Debug)]
pub struct FptOptions {
    pub field: Field,
    pub seed: u64,
    pub k_cap: usize,
}

impl Default for FptOptions {
    fn default() -> Self {
        FptOptions { field: Field::default(), seed: 0x5EED, k_cap: DEFAULT_K_CAP }
    }
}

/// Trials needed for failure probability at most `delta`, assuming per-trial
/// success of at least 1/4.
pub fn trial_count(delta: f64) -> usize {
    if !(delta > 0.0 && delta < 1.0) {
        return 1;
    }
    ((1.0 / delta).ln() / 0.25).ceil().max(1.0) as usize
}

/// One evaluation with x_i ← r_i·(e₀ + e_{v_i}) in GF(2^ℓ)[Z₂^dim].
pub fn evaluate(c: &Circuit, field: &Field, dim: u32, vectors: &[usize], scalars: &[FieldElement]) -> TBasis {
    let mut vals: Vec<TBasis> = Vec::with_capacity(c.len());
    for gate in c.gates() {
        let val = match gate {
            Gate::Input(v) => TBasis::substituted_input(dim, vectors[*v], scalars[*v]),
            Gate::Add(children) => {
                let mut acc = TBasis::zero(dim);
                for &ch in children {
                    acc.add_assign(&vals[ch]);
                }
                acc
            }
            Gate::Mul(a, b) => vals[*a].mul(field, &vals[*b]),
            Gate::Scale(a, s) => vals[*a].scale(field, *s),
        };
        vals.push(val);
    }
    vals.swap_remove(c.output())
}

fn one_trial(c: &Circuit, field: &Field, dim: u32, rng: &mut ChaCha8Rng) -> bool {
    let vectors: Vec<usize> = (0..c.num_vars()).map(|_| rng.gen_range(1..1usize << dim)).collect();
    let scalars: Vec<FieldElement> = (0..c.num_vars()).map(|_| field.random_nonzero(rng)).collect();
    !evaluate(c, field, dim, &vectors, &scalars).is_zero()
}

/// Yes only if some multilinear monomial (of degree at most `degree`) has a
/// nonzero coefficient; never a false positive. On homogeneous circuits such
/// as the tree polynomials that means a monomial of degree exactly `degree`.
pub fn detect_multilinear(c: &Circuit, field: &Field, degree: u32, delta: f64, rng: &mut ChaCha8Rng) -> Result<bool, FptError> {
    c.check_degree(degree)?;
    if degree == 0 {
        return Err(FptError::KTooSmall);
    }
    Ok((0..trial_count(delta)).any(|_| one_trial(c, field, degree, rng)))
}

/// Whether `g` has a binary tree on exactly `k` vertices (any root).
pub fn decide_k_binary_tree(g: &Digraph, k: usize, delta: f64, opts: &FptOptions) -> Result<bool, FptError> {
    let mut rng = rng_from_seed(opts.seed);
    decide_with_rng(g, k, delta, opts, &mut rng)
}

fn decide_with_rng(g: &Digraph, k: usize, delta: f64, opts: &FptOptions, rng: &mut ChaCha8Rng) -> Result<bool, FptError> {
    if k < 1 {
        return Err(FptError::KTooSmall);
    }
    if k > opts.k_cap {
        return Err(FptError::KTooLarge { k, cap: opts.k_cap });
    }
    let dim = (k + 1) as u32;
    for _ in 0..trial_count(delta) {
        let rho: Vec<FieldElement> = (0..g.m()).map(|_| opts.field.random_nonzero(rng)).collect();
        let c = build_circuit(g, k, &rho)?;
        c.check_degree(dim)?;
        if one_trial(&c, &opts.field, dim, rng) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Deletes every arc whose removal keeps a k-tree; the survivors are the arcs of one tree.
pub fn search_k_binary_tree(g: &Digraph, k: usize, delta: f64, opts: &FptOptions) -> Result<Option<DirBinaryTree>, FptError> {
    let mut rng = rng_from_seed(opts.seed);
    let per_call = delta / (g.m() + 1) as f64;
    if !decide_with_rng(g, k, per_call, opts, &mut rng)? {
        return Ok(None);
    }
    let mut h = g.clone();
    for e in g.arcs() {
        let id = h.arc_id(e.0, e.1).expect("arc still present");
        let without = h.without_arc(id);
        if decide_with_rng(&without, k, per_call, opts, &mut rng)? {
            h = without;
        }
    }
    let tree = if k == 1 {
        DirBinaryTree::single(0)
    } else {
        let arcs = h.arcs().to_vec();
        let root = arcs.iter().map(|&(_, v)| v).find(|&v| h.out_neighbors(v).is_empty());
        match root {
            Some(root) => DirBinaryTree { root, arcs },
            None => return Err(FptError::SearchFailed),
        }
    };
    if tree.size() != k || validate_dir_tree(g, &tree).is_err() {
        return Err(FptError::SearchFailed);
    }
    Ok(Some(tree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::has_tree_of_size;

    fn opts() -> FptOptions {
        FptOptions::default()
    }

    fn poly_circuit() -> (Circuit, [usize; 3]) {
        let mut c = Circuit::new(3);
        let x = [c.input(0), c.input(1), c.input(2)];
        (c, x)
    }

    #[test]
    fn trial_count_formula() {
        assert_eq!(trial_count(0.01), 19);
        assert_eq!(trial_count(0.5), 3);
        assert_eq!(trial_count(1e-6), 56);
    }

    #[test]
    fn detects_multilinear_terms() {
        // x1²x2 + x3³ + x1x2x3: only the last term is multilinear
        let (mut c, [x1, x2, x3]) = poly_circuit();
        let sq = c.mul(x1, x1);
        let a = c.mul(sq, x2);
        let x3x3 = c.mul(x3, x3);
        let b = c.mul(x3x3, x3);
        let x12 = c.mul(x1, x2);
        let d = c.mul(x12, x3);
        let out = c.add(vec![a, b, d]);
        c.set_output(out);
        let mut rng = rng_from_seed(1);
        assert!(detect_multilinear(&c, &Field::default(), 3, 1e-6, &mut rng).unwrap());
    }

    #[test]
    fn squares_never_detected() {
        let (mut c, [x1, x2, _]) = poly_circuit();
        let sq = c.mul(x1, x1);
        let mut rng = rng_from_seed(2);
        c.set_output(sq);
        for _ in 0..50 {
            assert!(!detect_multilinear(&c, &Field::default(), 2, 0.01, &mut rng).unwrap());
        }
        let s = c.add(vec![x1, x2]);
        let s2 = c.mul(s, s);
        c.set_output(s2);
        for _ in 0..50 {
            assert!(!detect_multilinear(&c, &Field::new(16).unwrap(), 2, 0.01, &mut rng).unwrap());
        }
    }

    #[test]
    fn degree_overflow_rejected() {
        let (mut c, [x1, x2, x3]) = poly_circuit();
        let a = c.mul(x1, x2);
        let b = c.mul(a, x3);
        c.set_output(b);
        let mut rng = rng_from_seed(3);
        assert!(matches!(detect_multilinear(&c, &Field::default(), 2, 0.1, &mut rng), Err(FptError::DegreeOverflow { .. })));
    }

    #[test]
    fn decide_on_chain() {
        let chain = Digraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(decide_k_binary_tree(&chain, 3, 1e-6, &opts()).unwrap());
        for seed in 0..20 {
            let o = FptOptions { seed, ..opts() };
            assert!(!decide_k_binary_tree(&chain, 4, 0.01, &o).unwrap());
        }
        assert!(matches!(decide_k_binary_tree(&chain, 0, 0.1, &opts()), Err(FptError::KTooSmall)));
    }

    #[test]
    fn decide_matches_oracle_small() {
        for seed in 0..40u64 {
            let n = 3 + (seed % 6) as usize;
            let g = crate::graph::gen_digraph(n, (n + (seed % 5) as usize).min(n * (n - 1)), seed);
            for k in 1..=n.min(6) {
                let truth = has_tree_of_size(&g, k).unwrap();
                let got = decide_k_binary_tree(&g, k, 1e-6, &FptOptions { seed, ..opts() }).unwrap();
                assert_eq!(got, truth, "seed {seed} k {k}");
            }
        }
    }

    #[test]
    fn search_returns_valid_tree() {
        let chain = Digraph::new(3, [(0, 1), (1, 2)]).unwrap();
        let t = search_k_binary_tree(&chain, 3, 1e-6, &opts()).unwrap().unwrap();
        assert_eq!(t.arcs, vec![(0, 1), (1, 2)]);
        assert_eq!(search_k_binary_tree(&chain, 4, 0.01, &opts()).unwrap(), None);
        let one = search_k_binary_tree(&chain, 1, 0.01, &opts()).unwrap().unwrap();
        assert_eq!(one.size(), 1);
    }
}
