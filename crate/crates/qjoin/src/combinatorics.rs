//! Validity and compatibility predicates for multiplicity matrices, small
//! integer constructors (bounded compositions, two-row contingency fills) and
//! exhaustive enumeration of multiplicity matrices for unions of cliques.
//!
//! All functions here are pure and exact; enumeration order is fixed so that
//! first-witness results are reproducible across runs and platforms.

use crate::model::{IntMatrix, MultiplicityMatrix, SizeTuple};
use std::collections::HashMap;
use thiserror::Error;

/// Four rows suffice for completeness when both sides are unions of complete
/// graphs; larger values are exploratory only.
pub const DEFAULT_R_MAX: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinatoricsError {
    #[error("matrix has {got} columns but the tuple has {expected} components")]
    ColumnCountMismatch { got: usize, expected: usize },
    #[error("matrices have different row counts: {left} vs {right}")]
    RowCountMismatch { left: usize, right: usize },
}

/// Is `v` a multiplicity matrix for the union of cliques with orders `m`?
///
/// True iff every column sums to the corresponding order and every column for
/// an order `>= 2` has at least two nonzero entries.
pub fn is_multiplicity_matrix_for(
    v: &MultiplicityMatrix,
    m: &SizeTuple,
) -> Result<bool, CombinatoricsError> {
    if v.cols() != m.len() {
        return Err(CombinatoricsError::ColumnCountMismatch {
            got: v.cols(),
            expected: m.len(),
        });
    }
    Ok(m.entries().iter().enumerate().all(|(i, &mi)| {
        let col = v.column(i);
        let sum: usize = col.iter().sum();
        let nonzeros = col.iter().filter(|&&e| e > 0).count();
        sum == mi && (mi < 2 || nonzeros >= 2)
    }))
}

/// Compatibility of a pair: equal middle row-sum vectors and entrywise
/// positive product of the middles.
pub fn is_compatible(
    v: &MultiplicityMatrix,
    w: &MultiplicityMatrix,
) -> Result<bool, CombinatoricsError> {
    if v.rows() != w.rows() {
        return Err(CombinatoricsError::RowCountMismatch {
            left: v.rows(),
            right: w.rows(),
        });
    }
    Ok(v.middle_row_sums() == w.middle_row_sums()
        && middles_positive(&v.middle(), &w.middle()))
}

/// Every entry of `a^T b` strictly positive, i.e. every pair of columns
/// shares a row where both are nonzero.
fn middles_positive(a: &IntMatrix, b: &IntMatrix) -> bool {
    debug_assert_eq!(a.rows(), b.rows());
    for i in 0..a.cols() {
        for j in 0..b.cols() {
            let hit = (0..a.rows()).any(|s| a.get(s, i) > 0 && b.get(s, j) > 0);
            if !hit {
                return false;
            }
        }
    }
    true
}

/// A vector `b` with `b_i >= 1`, `b_i <= caps_i` and `sum(b) = target`, or
/// `None` when no such vector exists (iff `len(caps) <= target <= sum(caps)`
/// fails). Fills greedily from the left after reserving 1 per slot, so the
/// result is deterministic.
pub fn compose_bounded(target: usize, caps: &[usize]) -> Option<Vec<usize>> {
    debug_assert!(caps.iter().all(|&c| c >= 1), "caps must be positive");
    let s = caps.len();
    let cap_total: usize = caps.iter().sum();
    if s == 0 {
        return (target == 0).then(Vec::new);
    }
    if target < s || target > cap_total {
        return None;
    }
    let mut b = vec![1usize; s];
    let mut rem = target - s;
    for (bi, &cap) in b.iter_mut().zip(caps) {
        let add = rem.min(cap - 1);
        *bi += add;
        rem -= add;
    }
    debug_assert_eq!(rem, 0);
    Some(b)
}

/// A `2 x t` nonnegative matrix with the prescribed row and column sums, or
/// `None` when `r1 + r2 != sum(col_sums)`. With two rows a greedy
/// left-to-right fill (put `min(remaining r1, c_j)` in row 1) always works.
pub fn fill_two_row_table(row_sums: (usize, usize), col_sums: &[usize]) -> Option<IntMatrix> {
    let (r1, r2) = row_sums;
    let total: usize = col_sums.iter().sum();
    if r1 + r2 != total {
        return None;
    }
    let mut y = IntMatrix::zeros(2, col_sums.len());
    let mut rem = r1;
    for (j, &c) in col_sums.iter().enumerate() {
        let top = rem.min(c);
        y.set(0, j, top);
        y.set(1, j, c - top);
        rem -= top;
    }
    debug_assert_eq!(rem, 0);
    Some(y)
}

/// All weak compositions of `total` into `parts` parts, ascending
/// lexicographic order.
fn weak_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

/// Candidate columns for a clique of order `order` with `r` eigenvalue
/// positions: weak compositions of `order` into `r` parts, minus the
/// single-nonzero ones when `order >= 2`. Ascending lexicographic order.
fn clique_columns(order: usize, r: usize) -> Vec<Vec<usize>> {
    weak_compositions(order, r)
        .into_iter()
        .filter(|col| order < 2 || col.iter().filter(|&&e| e > 0).count() >= 2)
        .collect()
}

/// Streaming enumeration of every `r x k` multiplicity matrix for the union
/// of cliques `m`, each exactly once, in lexicographic order over the
/// column-major entry sequence (the last column varies fastest).
pub struct MultiplicityMatrixIter {
    columns: Vec<Vec<Vec<usize>>>, // candidate columns, per tuple entry
    indices: Vec<usize>,
    done: bool,
    r: usize,
}

impl MultiplicityMatrixIter {
    fn new(m: &SizeTuple, r: usize) -> Self {
        assert!(r >= 3, "enumeration needs r >= 3");
        let columns: Vec<Vec<Vec<usize>>> = m
            .entries()
            .iter()
            .map(|&order| clique_columns(order, r))
            .collect();
        let done = columns.iter().any(|c| c.is_empty());
        Self {
            indices: vec![0; m.len()],
            columns,
            done,
            r,
        }
    }

    fn current(&self) -> MultiplicityMatrix {
        let k = self.columns.len();
        let mut rows = vec![vec![0usize; k]; self.r];
        for (j, (&idx, cands)) in self.indices.iter().zip(&self.columns).enumerate() {
            for (s, &value) in cands[idx].iter().enumerate() {
                rows[s][j] = value;
            }
        }
        MultiplicityMatrix::from_rows(rows).expect("enumerated columns are valid")
    }

    fn advance(&mut self) {
        for j in (0..self.indices.len()).rev() {
            self.indices[j] += 1;
            if self.indices[j] < self.columns[j].len() {
                return;
            }
            self.indices[j] = 0;
        }
        self.done = true;
    }
}

impl Iterator for MultiplicityMatrixIter {
    type Item = MultiplicityMatrix;

    fn next(&mut self) -> Option<MultiplicityMatrix> {
        if self.done {
            return None;
        }
        let item = self.current();
        self.advance();
        Some(item)
    }
}

/// See [`MultiplicityMatrixIter`]. Requires `r >= 3`.
pub fn enumerate_multiplicity_matrices(m: &SizeTuple, r: usize) -> MultiplicityMatrixIter {
    MultiplicityMatrixIter::new(m, r)
}

/// Number of matrices [`enumerate_multiplicity_matrices`] yields:
/// product over entries of `C(m_i + r - 1, r - 1) - [m_i >= 2] * r`.
pub fn enumeration_count(m: &SizeTuple, r: usize) -> usize {
    m.entries()
        .iter()
        .map(|&order| {
            let all = binomial(order + r - 1, r - 1);
            if order >= 2 {
                all - r
            } else {
                all
            }
        })
        .product()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// First compatible pair of multiplicity matrices for `(m, n)` with a common
/// row count `r` in `[3, r_max]`, or `None` if no pair exists.
///
/// Candidates on the `m` side are indexed by their middle row-sum vector and
/// joined against `n`-side candidates sharing it, so only sum-matched pairs
/// are tested for positivity. Deterministic: pairs are searched in order of
/// `(r, index of W, index of V)` in enumeration order.
pub fn compatible_pair_exists(
    m: &SizeTuple,
    n: &SizeTuple,
    r_max: usize,
) -> Option<(MultiplicityMatrix, MultiplicityMatrix)> {
    assert!(r_max >= 3, "pair search needs r_max >= 3");
    for r in 3..=r_max {
        // Index the m side by middle row sums. Matrices sharing a middle are
        // interchangeable for compatibility, so keep the first per middle.
        let mut by_key: HashMap<Vec<usize>, Vec<MultiplicityMatrix>> = HashMap::new();
        let mut seen_middles = std::collections::HashSet::new();
        for v in enumerate_multiplicity_matrices(m, r) {
            if seen_middles.insert(v.middle()) {
                by_key.entry(v.middle_row_sums()).or_default().push(v);
            }
        }
        for w in enumerate_multiplicity_matrices(n, r) {
            let Some(bucket) = by_key.get(&w.middle_row_sums()) else {
                continue;
            };
            let w_middle = w.middle();
            for v in bucket {
                if middles_positive(&v.middle(), &w_middle) {
                    return Some((v.clone(), w));
                }
            }
        }
    }
    None
}
