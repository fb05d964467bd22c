//! Longest heapable subsequence. A subsequence is heapable exactly when its
//! positions span a binary tree of the permutation DAG, so the search is an
//! unrooted MBT solve on that DAG.

use thiserror::Error;

use crate::fpt::{search_k_binary_tree, FptError, FptOptions};
use crate::graph::{permutation_dag, DirBinaryTree};
use crate::oracle::{brute_mbt_dag_with_cap, OracleError, DAG_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeapableError {
    #[error("values at positions {0} and {1} are equal")]
    Duplicate(usize, usize),
    #[error("bad number `{0}`")]
    Parse(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Fpt(#[from] FptError),
    #[error("internal error: witness is not heapable")]
    BadWitness,
}

/// Distinct values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence {
    values: Vec<i64>,
}

impl Sequence {
    pub fn new(values: Vec<i64>) -> Result<Self, HeapableError> {
        let mut seen = std::collections::HashMap::new();
        for (i, &v) in values.iter().enumerate() {
            if let Some(j) = seen.insert(v, i) {
                return Err(HeapableError::Duplicate(j, i));
            }
        }
        Ok(Sequence { values })
    }

    /// Whitespace-separated integers.
    pub fn parse(text: &str) -> Result<Self, HeapableError> {
        let values = text.split_whitespace().map(|t| t.parse().map_err(|_| HeapableError::Parse(t.to_string()))).collect::<Result<_, _>>()?;
        Sequence::new(values)
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn subsequence(&self, positions: &[usize]) -> Sequence {
        Sequence { values: positions.iter().map(|&p| self.values[p]).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeapTrace {
    pub heapable: bool,
    /// Parent index (into the sequence) of each attached element.
    pub parents: Vec<Option<usize>>,
    pub failed_at: Option<usize>,
}

/// Greedy insertion: each element hangs below the largest smaller placed
/// value that still has a free child slot.
pub fn is_heapable(seq: &Sequence) -> HeapTrace {
    let vals = seq.values();
    let mut parents = vec![None; vals.len()];
    let mut open: std::collections::BTreeMap<i64, (usize, u8)> = Default::default();
    for (i, &x) in vals.iter().enumerate() {
        if i > 0 {
            let Some((&pv, &(pi, used))) = open.range(..x).next_back() else {
                return HeapTrace { heapable: false, parents, failed_at: Some(i) };
            };
            parents[i] = Some(pi);
            if used == 1 {
                open.remove(&pv);
            } else {
                open.insert(pv, (pi, 1));
            }
        }
        open.insert(x, (i, 0));
    }
    HeapTrace { heapable: true, parents, failed_at: None }
}

/// Tries every attachment choice.
pub fn is_heapable_exhaustive(seq: &Sequence) -> bool {
    fn go(vals: &[i64], i: usize, slots: &mut Vec<u8>) -> bool {
        if i == vals.len() {
            return true;
        }
        for p in 0..i {
            if vals[p] < vals[i] && slots[p] < 2 {
                slots[p] += 1;
                if go(vals, i + 1, slots) {
                    return true;
                }
                slots[p] -= 1;
            }
        }
        false
    }
    let vals = seq.values();
    vals.len() <= 1 || go(vals, 1, &mut vec![0; vals.len()])
}

#[derive(Clone, Copy, Debug)]
pub enum HeapSolver {
    Brute,
    /// Increasing k until the randomized search finds no tree.
    Fpt { delta: f64, options: FptOptions },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeapableResult {
    pub length: usize,
    /// Increasing positions of the witness.
    pub positions: Vec<usize>,
    pub tree: DirBinaryTree,
}

fn brute_best(seq: &Sequence) -> Result<DirBinaryTree, HeapableError> {
    let g = permutation_dag(seq.values()).expect("values are distinct");
    let mut best: Option<DirBinaryTree> = None;
    for r in 0..seq.len() {
        let t = brute_mbt_dag_with_cap(&g, r, DAG_CAP)?.tree;
        if best.as_ref().is_none_or(|b| t.size() > b.size()) {
            best = Some(t);
        }
    }
    Ok(best.expect("nonempty sequence"))
}

fn fpt_best(seq: &Sequence, delta: f64, options: &FptOptions) -> Result<DirBinaryTree, HeapableError> {
    let g = permutation_dag(seq.values()).expect("values are distinct");
    let mut best = DirBinaryTree::single(0);
    for k in 2..=seq.len() {
        match search_k_binary_tree(&g, k, delta, options)? {
            Some(t) => best = t,
            None => break,
        }
    }
    Ok(best)
}

pub fn longest_heapable(seq: &Sequence, solver: HeapSolver) -> Result<HeapableResult, HeapableError> {
    if seq.is_empty() {
        return Ok(HeapableResult { length: 0, positions: Vec::new(), tree: DirBinaryTree::single(0) });
    }
    let tree = match solver {
        HeapSolver::Brute => brute_best(seq)?,
        HeapSolver::Fpt { delta, options } => fpt_best(seq, delta, &options)?,
    };
    let positions = tree.vertices();
    if !is_heapable(&seq.subsequence(&positions)).heapable {
        return Err(HeapableError::BadWitness);
    }
    Ok(HeapableResult { length: positions.len(), positions, tree })
}

/// Largest heapable subsequence by trying every subset with exhaustive attachment.
pub fn longest_heapable_by_subsets(seq: &Sequence) -> usize {
    let n = seq.len();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let pos: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if is_heapable_exhaustive(&seq.subsequence(&pos)) {
            best = size;
        }
    }
    best
}
