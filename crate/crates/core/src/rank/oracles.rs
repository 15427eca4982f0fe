//! Independent decision routes used to cross-check the LP: the permutation
//! characterization of maximality, and the reduction to square column blocks.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{decide_nonmaximal, oriented, RankDecision};
use crate::combinatorics::combinations;
use crate::error::{Error, Result};
use crate::lopsided::WeightVector;
use crate::lp::{lp_feasible, nonmax_system, LpOutcome};
use crate::matrix::{comparison_matrix, solve, NonnegMatrix};
use crate::rational::{lcm_of_denominators, Rational};

/// Largest size accepted by the permutation search.
pub const PERMUTATION_LIMIT: usize = 10;

/// Integer copy of `b` after clearing each row's denominators. Positive row
/// scaling does not change the signs of the comparison matrix minors.
pub(crate) fn integer_rows(b: &NonnegMatrix) -> Vec<Vec<BigInt>> {
    (0..b.rows())
        .map(|i| {
            let row = b.row(i);
            let s = lcm_of_denominators(row);
            row.iter().map(|v| v.numer() * (&s / v.denom())).collect()
        })
        .collect()
}

/// Exact determinant of a small integer matrix by Bareiss elimination.
pub(crate) fn int_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * prev
}

/// Lexicographically first column permutation `P` with `𝓜(AP)` a nonsingular
/// M-matrix, returned with `d = 𝓜(AP)⁻¹·1 > 0`. Prefixes whose leading minor is
/// not positive are pruned.
pub fn find_m_matrix_permutation(b: &NonnegMatrix) -> Result<Option<(Vec<usize>, Vec<Rational>)>> {
    if !b.is_square() {
        return Err(Error::Dimension("permutation search needs a square matrix".into()));
    }
    let n = b.rows();
    if n > PERMUTATION_LIMIT {
        return Err(Error::Capability { what: format!("permutation search of size {n}"), limit: PERMUTATION_LIMIT });
    }
    let ints = integer_rows(b);
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    if !extend(&ints, &mut perm, &mut used) {
        return Ok(None);
    }
    let z = comparison_matrix(&b.permute_columns(&perm))?;
    let d = solve(z.as_rat(), &vec![Rational::one(); n])
        .ok_or_else(|| Error::Inconsistent("M-matrix with singular comparison matrix".into()))?;
    Ok(Some((perm, d)))
}

fn extend(a: &[Vec<BigInt>], perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let n = a.len();
    let k = perm.len();
    if k == n {
        return true;
    }
    for c in 0..n {
        if used[c] {
            continue;
        }
        perm.push(c);
        let minor: Vec<Vec<BigInt>> = (0..=k)
            .map(|i| {
                perm.iter()
                    .enumerate()
                    .map(|(pos, &col)| if pos == i { a[i][col].clone() } else { -&a[i][col] })
                    .collect()
            })
            .collect();
        if int_det(minor).is_positive() {
            used[c] = true;
            if extend(a, perm, used) {
                return true;
            }
            used[c] = false;
        }
        perm.pop();
    }
    false
}

/// Decides a square matrix by searching all column permutations for an
/// M-matrix comparison matrix. Nonmaximal verdicts carry the LP weights.
pub fn decide_by_permutations(a: &NonnegMatrix) -> Result<RankDecision> {
    if !a.is_square() {
        return Err(Error::Dimension("permutation oracle needs a square matrix".into()));
    }
    let n = a.rows();
    if let Some((permutation, scaling)) = find_m_matrix_permutation(a)? {
        return Ok(RankDecision::Maximal {
            columns: (0..n).collect(),
            permutation,
            scaling,
            farkas: None,
            transposed: false,
        });
    }
    match lp_feasible(&nonmax_system(a)) {
        LpOutcome::Feasible(x) => {
            let lambda = WeightVector::new(x)?;
            let witness = super::build_witness(a, &lambda)?;
            Ok(RankDecision::Nonmaximal { lambda, witness, transposed: false })
        }
        LpOutcome::Infeasible(_) => {
            Err(Error::Inconsistent("no M-matrix permutation yet the system is infeasible".into()))
        }
    }
}

/// True iff every square column block of `a` (after orienting rows ≤ columns)
/// has nonmaximal phaseless rank.
pub fn decide_by_submatrices(a: &NonnegMatrix) -> Result<bool> {
    let (b, _) = oriented(a);
    for columns in combinations(b.cols(), b.rows()) {
        if !decide_nonmaximal(&b.select_columns(&columns))?.is_nonmaximal() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::determinant;
    use crate::rational::int;

    #[test]
    fn identity_and_derangement() {
        let id = NonnegMatrix::identity(3);
        match decide_by_permutations(&id).unwrap() {
            RankDecision::Maximal { permutation, .. } => assert_eq!(permutation, vec![0, 1, 2]),
            other => panic!("{other:?}"),
        }
        let d4 = NonnegMatrix::from_i64(&[&[0, 1, 1, 1], &[1, 0, 1, 1], &[1, 1, 0, 1], &[1, 1, 1, 0]]).unwrap();
        assert!(decide_by_permutations(&d4).unwrap().is_nonmaximal());
    }

    #[test]
    fn int_det_matches_rational() {
        let rows: Vec<Vec<BigInt>> = vec![
            vec![0.into(), 2.into(), 1.into()],
            vec![3.into(), (-1).into(), 4.into()],
            vec![1.into(), 1.into(), 5.into()],
        ];
        let m = NonnegMatrix::from_i64(&[&[0, 2, 1], &[3, 1, 4], &[1, 1, 5]]).unwrap();
        let mut r = m.as_rat().clone();
        r = crate::matrix::RatMatrix::from_fn(
            3,
            3,
            |i, j| if (i, j) == (1, 1) { int(-1) } else { r.get(i, j).clone() },
        );
        assert_eq!(Rational::from_integer(int_det(rows)), determinant(&r));
    }

    #[test]
    fn size_limit() {
        let big = NonnegMatrix::identity(11);
        assert!(matches!(decide_by_permutations(&big), Err(Error::Capability { .. })));
    }

    #[test]
    fn submatrix_examples() {
        assert!(decide_by_submatrices(&NonnegMatrix::ones(3, 5)).unwrap());
        let a = NonnegMatrix::from_i64(&[&[9, 1, 1, 1, 1], &[1, 9, 1, 1, 1], &[1, 1, 9, 1, 1]]).unwrap();
        assert!(!decide_by_submatrices(&a).unwrap());
    }
}
