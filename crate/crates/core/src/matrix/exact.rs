//! Exact linear algebra by fraction-free (Bareiss) elimination.
//!
//! Rows are first cleared of denominators, so every intermediate value is an
//! integer minor of the scaled matrix and the division in each update is exact.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::RatMatrix;
use crate::rational::{lcm_of_denominators, Rational};

/// Integer rows `s_i · row_i` together with the scale factors `s_i`.
fn integer_rows(m: &RatMatrix) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut rows = Vec::with_capacity(m.rows());
    let mut scales = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let row = m.row(i);
        let scale = lcm_of_denominators(row);
        rows.push(row.iter().map(|v| v.numer() * (&scale / v.denom())).collect::<Vec<_>>());
        scales.push(scale);
    }
    (rows, scales)
}

/// One Bareiss update of the trailing block below/right of pivot `k`.
fn bareiss_step(a: &mut [Vec<BigInt>], k: usize, prev: &BigInt) {
    let (head, tail) = a.split_at_mut(k + 1);
    let pivot_row = &head[k];
    let pivot = &pivot_row[k];
    for row in tail.iter_mut() {
        let factor = row[k].clone();
        for j in k + 1..row.len() {
            let v = pivot * &row[j] - &factor * &pivot_row[j];
            row[j] = if prev.is_one() { v } else { v / prev };
        }
        row[k] = BigInt::zero();
    }
}

/// Exact rank, by fraction-free elimination with full pivoting.
pub fn rational_rank(m: &RatMatrix) -> usize {
    let (mut a, _) = integer_rows(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let pivot = (k..rows).flat_map(|i| (k..cols).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
        let Some((pi, pj)) = pivot else { break };
        a.swap(k, pi);
        if pj != k {
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
        }
        bareiss_step(&mut a, k, &prev);
        prev = a[k][k].clone();
        rank += 1;
    }
    rank
}

/// Exact determinant of a square matrix.
pub fn determinant(m: &RatMatrix) -> Rational {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    let (mut a, scales) = integer_rows(m);
    let mut prev = BigInt::one();
    let mut negate = false;
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Rational::zero(),
            }
        }
        if k + 1 < n {
            bareiss_step(&mut a, k, &prev);
        }
        prev = a[k][k].clone();
    }
    let scale: BigInt = scales.iter().product();
    let det = Rational::new(prev, scale);
    if negate {
        -det
    } else {
        det
    }
}

/// Leading principal minors `det_1, …, det_n`, exactly.
pub fn leading_minors(m: &RatMatrix) -> Vec<Rational> {
    assert!(m.is_square(), "leading minors of a non-square matrix");
    let n = m.rows();
    let (mut a, scales) = integer_rows(m);
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    let mut scale = BigInt::one();
    for k in 0..n {
        scale *= &scales[k];
        if a[k][k].is_zero() {
            // Elimination without pivoting stops here; the remaining minors are
            // computed one by one.
            minors.push(Rational::zero());
            for size in k + 2..=n {
                let idx: Vec<usize> = (0..size).collect();
                minors.push(determinant(&m.select(&idx, &idx)));
            }
            return minors;
        }
        minors.push(Rational::new(a[k][k].clone(), scale.clone()));
        if k + 1 < n {
            bareiss_step(&mut a, k, &prev);
        }
        prev = a[k][k].clone();
    }
    minors
}

/// Solves `m · x = b` for nonsingular square `m`; `None` when singular.
pub fn solve(m: &RatMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert!(m.is_square() && b.len() == m.rows());
    let n = m.rows();
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.push(b[i].clone());
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(k, p);
        let inv = a[k][k].recip();
        for v in a[k][k..].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k || row[k].is_zero() {
                continue;
            }
            let f = row[k].clone();
            for (v, p) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                *v -= &f * p;
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}
