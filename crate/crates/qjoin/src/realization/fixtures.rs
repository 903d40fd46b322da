//! Exact closed-form fixtures: an orthogonal symmetric matrix in the pattern
//! of an 8-cycle joined with a 4-cycle, and the rank-two matrices resolving a
//! triangle-free join of one edge with isolated vertices. Entries are
//! evaluated from radicals, not decimal literals, so residuals reach machine
//! precision.

use super::join_blocks;
use crate::model::DenseSymMatrix;
use nalgebra::DMatrix;

/// Signed cycle adjacency: the cycle on `n` vertices with the closing edge
/// `(0, n-1)` negated, scaled by `scale`.
fn signed_cycle(n: usize, scale: f64) -> DenseSymMatrix {
    let mut a = DenseSymMatrix::zeros(n);
    for i in 0..n - 1 {
        a.set(i, i + 1, scale);
    }
    a.set(0, n - 1, -scale);
    a
}

/// Blocks of the exact cycle-join realization: `A_G` on the 8-cycle with
/// eigenvalues `{-1, -l, l, 1}` each doubled, `A_H` on the 4-cycle with
/// eigenvalues `{-l, l}` each doubled (`l = sqrt(2) - 1`), and the 8 x 4
/// cross block that couples them into an orthogonal symmetric matrix.
pub fn cycle_join_blocks() -> (DenseSymMatrix, DenseSymMatrix, DMatrix<f64>) {
    let s2 = 2f64.sqrt();
    let lambda = s2 - 1.0;
    let a_g = signed_cycle(8, 1.0 / (2.0 + s2).sqrt());
    let a_h = signed_cycle(4, 1.0 / (2.0 + s2));

    let alpha = |r: f64| (5.0 + r / s2).sqrt();
    let rows: [[f64; 4]; 8] = [
        [3.0 * s2, -1.0, 6.0 * s2, 3.0],
        [-alpha(1.0), 3.0 * alpha(-7.0), -alpha(-1.0), 3.0 * alpha(7.0)],
        [-9.0, -s2, -3.0, -2.0 * s2],
        [alpha(7.0), -3.0 * alpha(1.0), -alpha(-7.0), -3.0 * alpha(-1.0)],
        [6.0 * s2, 3.0, -3.0 * s2, 1.0],
        [-alpha(-1.0), 3.0 * alpha(7.0), alpha(1.0), -3.0 * alpha(-7.0)],
        [-3.0, -2.0 * s2, 9.0, s2],
        [-alpha(-7.0), -3.0 * alpha(-1.0), -alpha(7.0), 3.0 * alpha(1.0)],
    ];
    let scale = lambda.sqrt() / 10.0;
    let c = DMatrix::from_fn(8, 4, |i, j| scale * rows[i][j]);
    (a_g, a_h, c)
}

/// The assembled 12 x 12 cycle-join fixture `[[A_G, C], [C^T, -A_H]]`.
pub fn cycle_join_matrix() -> DenseSymMatrix {
    let (a_g, a_h, c) = cycle_join_blocks();
    join_blocks(&a_g, &a_h, &c)
}

/// Rank-two matrix in the pattern of one edge joined with `m` isolated
/// vertices whose nonzero eigenvalues are exactly `{1, -1}`:
/// `[[A, B], [B^T, 0]]` with `A = [[4, 3], [3, -4]] / 20` and
/// `B = sqrt(3) / (4 sqrt(m)) * [1; 2]^T` per column.
pub fn rank_two_clique_vs_isolated(m: usize) -> DenseSymMatrix {
    assert!(m >= 1);
    let mut x = DenseSymMatrix::zeros(2 + m);
    x.set(0, 0, 4.0 / 20.0);
    x.set(0, 1, 3.0 / 20.0);
    x.set(1, 1, -4.0 / 20.0);
    let b = 3f64.sqrt() / (4.0 * (m as f64).sqrt());
    for j in 0..m {
        x.set(0, 2 + j, b);
        x.set(1, 2 + j, 2.0 * b);
    }
    x
}

/// The general family for a positive scale `lambda != 1`: rank two with
/// nonzero eigenvalues `{lambda, -1}`, pattern one edge joined with `m`
/// isolated vertices, built from the two explicit unit eigenvectors.
pub fn rank_two_clique_vs_isolated_general(lambda: f64, m: usize) -> DenseSymMatrix {
    assert!(m >= 1 && lambda > 0.0);
    let n = 2 + m;
    let x1 = 1.0 / 2f64.sqrt(); // entries of the unit vector on the edge
    let x2 = 1.0 / (m as f64).sqrt(); // entries of the unit vector on the rest
    let mut x = DenseSymMatrix::zeros(n);
    // top block (lambda - 1) x1 x1^T, cross block sqrt(lambda) x1 x2^T, zero bottom
    for i in 0..2 {
        for j in i..2 {
            x.set(i, j, (lambda - 1.0) * x1 * x1);
        }
        for j in 0..m {
            x.set(i, 2 + j, lambda.sqrt() * x1 * x2);
        }
    }
    x
}
