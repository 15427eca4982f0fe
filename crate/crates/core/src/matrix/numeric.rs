use nalgebra::DMatrix;
use num_complex::Complex64;

use super::PhasedMatrix;

/// Relative factor used when no explicit rank tolerance is given.
pub const DEFAULT_RANK_RTOL: f64 = 1e-9;

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values strictly above the absolute tolerance `tol`.
pub fn numerical_rank(b: &PhasedMatrix, tol: f64) -> usize {
    singular_values(&b.to_complex()).into_iter().filter(|&s| s > tol).count()
}

/// Rank at `1e-9 × σ_max`.
pub fn numerical_rank_default(b: &PhasedMatrix) -> usize {
    let s = singular_values(&b.to_complex());
    let tol = DEFAULT_RANK_RTOL * s.first().copied().unwrap_or(0.0);
    s.into_iter().filter(|&v| v > tol).count()
}

/// Rank by complex Gaussian elimination with full modulus pivoting: the number
/// of pivots whose modulus exceeds `tol`. Independent of the SVD route.
pub fn elimination_rank(m: &DMatrix<Complex64>, tol: f64) -> usize {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let mut best = (k, k, 0.0);
        for i in k..rows {
            for j in k..cols {
                let v = a[(i, j)].norm();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if best.2 <= tol {
            break;
        }
        a.swap_rows(k, best.0);
        a.swap_columns(k, best.1);
        let pivot = a[(k, k)];
        for i in k + 1..rows {
            let f = a[(i, k)] / pivot;
            for j in k..cols {
                let v = a[(k, j)];
                a[(i, j)] -= f * v;
            }
        }
        rank += 1;
    }
    rank
}
