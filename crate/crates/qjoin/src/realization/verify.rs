//! Verification of candidate realizations: symmetry, orthogonality residual,
//! zero/nonzero support against the expected join pattern, and the +-1
//! spectrum check. Zero classification is relative to the matrix scale so
//! rescaled fixtures verify identically.

use super::{max_abs, RealizationConfig, RealizationError};
use crate::model::{DenseSymMatrix, SizeTuple};
use nalgebra::DMatrix;
use serde::Serialize;

/// Expected off-diagonal support of a join of graphs, one boolean per pair.
#[derive(Debug, Clone)]
pub struct SupportPattern {
    n: usize,
    adjacent: Vec<bool>, // row-major, diagonal unused
}

impl SupportPattern {
    fn blank(n: usize) -> Self {
        Self {
            n,
            adjacent: vec![false; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacent[i * self.n + j]
    }

    fn set_edge(&mut self, i: usize, j: usize) {
        self.adjacent[i * self.n + j] = true;
        self.adjacent[j * self.n + i] = true;
    }

    fn add_cross_edges(&mut self, split: usize) {
        for i in 0..split {
            for j in split..self.n {
                self.set_edge(i, j);
            }
        }
    }

    /// Join of two unions of complete graphs: all pairs within a clique
    /// block and all cross pairs are edges.
    pub fn clique_join(m: &SizeTuple, n: &SizeTuple) -> Self {
        let total = m.total() + n.total();
        let mut pattern = Self::blank(total);
        let mut offset = 0;
        for &order in m.entries().iter().chain(n.entries()) {
            for i in 0..order {
                for j in (i + 1)..order {
                    pattern.set_edge(offset + i, offset + j);
                }
            }
            offset += order;
        }
        pattern.add_cross_edges(m.total());
        pattern
    }

    /// Join of two unions of cycles (orders 1 and 2 degenerate to an isolated
    /// vertex and a single edge). Used for the exact cycle-join fixture.
    pub fn cycle_join(m: &SizeTuple, n: &SizeTuple) -> Self {
        let total = m.total() + n.total();
        let mut pattern = Self::blank(total);
        let mut offset = 0;
        for &order in m.entries().iter().chain(n.entries()) {
            if order == 2 {
                pattern.set_edge(offset, offset + 1);
            } else if order >= 3 {
                for i in 0..order {
                    pattern.set_edge(offset + i, offset + (i + 1) % order);
                }
            }
            offset += order;
        }
        pattern.add_cross_edges(m.total());
        pattern
    }
}

/// One off-diagonal entry violating the expected support.
#[derive(Debug, Clone, Serialize)]
pub struct PatternViolation {
    pub i: usize,
    pub j: usize,
    pub value: f64,
    /// Whether the pattern expected this entry to be nonzero.
    pub expected_nonzero: bool,
}

/// Everything the verifier measures. `pass` requires symmetry, the
/// orthogonality residual, the support pattern and the +-1 spectrum all to
/// hold at once.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub symmetry_defect: f64,
    pub residual: f64,
    pub pattern_ok: bool,
    pub pattern_violations: Vec<PatternViolation>,
    /// Ascending eigenvalues of the symmetrized input.
    pub eigenvalues: Vec<f64>,
    /// Count of eigenvalues within `tol_residual` of +1, respectively -1.
    pub i_plus: usize,
    pub i_minus: usize,
    pub eigen_ok: bool,
    pub pass: bool,
}

/// Off-diagonal entries disagreeing with the expected support at the given
/// absolute threshold (diagonal unconstrained).
pub(super) fn support_violations(
    x: &DMatrix<f64>,
    pattern: &SupportPattern,
    threshold: f64,
) -> Vec<PatternViolation> {
    let n = x.nrows();
    let mut violations = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let magnitude = x[(i, j)].abs();
            let expected_nonzero = pattern.is_adjacent(i, j);
            let ok = if expected_nonzero {
                magnitude >= threshold
            } else {
                magnitude < threshold
            };
            if !ok {
                violations.push(PatternViolation {
                    i,
                    j,
                    value: x[(i, j)],
                    expected_nonzero,
                });
            }
        }
    }
    violations
}

/// Verify a candidate realization of the join of the unions of cliques `m`
/// and `n`. Errors only on a dimension mismatch; every defect is data in the
/// report.
pub fn verify_realization(
    x: &DenseSymMatrix,
    m: &SizeTuple,
    n: &SizeTuple,
    cfg: &RealizationConfig,
) -> Result<VerificationReport, RealizationError> {
    verify_square(&x.to_dmatrix(), &SupportPattern::clique_join(m, n), cfg)
}

/// Verify an arbitrary square matrix against an explicit support pattern.
pub fn verify_square(
    x: &DMatrix<f64>,
    pattern: &SupportPattern,
    cfg: &RealizationConfig,
) -> Result<VerificationReport, RealizationError> {
    if x.nrows() != x.ncols() || x.nrows() != pattern.n() {
        return Err(RealizationError::DimensionMismatch {
            got: x.nrows().max(x.ncols()),
            expected: pattern.n(),
        });
    }
    let n = x.nrows();
    let mut symmetry_defect: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            symmetry_defect = symmetry_defect.max((x[(i, j)] - x[(j, i)]).abs());
        }
    }

    let residual = max_abs(&(x * x - DMatrix::identity(n, n)));

    let threshold = cfg.tol_nonzero * max_abs(x);
    let pattern_violations = support_violations(x, pattern, threshold);
    let pattern_ok = pattern_violations.is_empty();

    let symmetrized = 0.5 * (x + x.transpose());
    let mut eigenvalues: Vec<f64> = symmetrized.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    let i_plus = eigenvalues.iter().filter(|&&e| (e - 1.0).abs() <= cfg.tol_residual).count();
    let i_minus = eigenvalues.iter().filter(|&&e| (e + 1.0).abs() <= cfg.tol_residual).count();
    let eigen_ok = i_plus + i_minus == n && i_plus >= 1 && i_minus >= 1;

    let pass = symmetry_defect <= cfg.tol_residual
        && residual <= cfg.tol_residual
        && pattern_ok
        && eigen_ok;
    Ok(VerificationReport {
        n,
        symmetry_defect,
        residual,
        pattern_ok,
        pattern_violations,
        eigenvalues,
        i_plus,
        i_minus,
        eigen_ok,
        pass,
    })
}
