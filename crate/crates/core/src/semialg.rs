//! Polynomial-inequality descriptions of square matrices with nonmaximal
//! phaseless rank.
//!
//! A square `A` is nonmaximal iff no column permutation `P` makes `𝓜(AP)` a
//! nonsingular M-matrix. For `n ≤ 4` this is the single condition
//! `det 𝓜(AP) ≤ 0` for every `P`. For `n = 4` the 24 determinants take only six
//! distinct values: every one equals `2·Σ_{σ∈V} Π_i a_{i,p(σ(i))} − perm(A)`,
//! where `V` is the Klein four-group, so permutations in the same coset of `V`
//! share it. From `n = 5` on the smaller leading minors are needed too.

use num_traits::{One, Signed, Zero};

use crate::combinatorics::permutations;
use crate::error::{Error, Result};
use crate::matrix::{comparison_matrix, determinant, leading_minors, NonnegMatrix};
use crate::rational::Rational;

/// Largest size for the permutation scans.
pub const SCAN_LIMIT: usize = 8;
/// Largest size for the permanent.
pub const PERMANENT_LIMIT: usize = 12;

/// A permutation whose inequality fails, with the offending exact value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub permutation: Vec<usize>,
    /// 1-based size of the leading minor the value belongs to.
    pub minor: usize,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SemialgebraicReport {
    pub member: bool,
    pub violated: Vec<Violation>,
    /// Permutations with `det 𝓜(AP) = 0`.
    pub boundary: Vec<Vec<usize>>,
}

impl SemialgebraicReport {
    fn from_parts(violated: Vec<Violation>, boundary: Vec<Vec<usize>>) -> Self {
        Self { member: violated.is_empty(), violated, boundary }
    }
}

fn require_square(a: &NonnegMatrix, n: Option<usize>, limit: usize) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("expected a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    if let Some(n) = n {
        if a.rows() != n {
            return Err(Error::Dimension(format!("expected {n}x{n}, got {}x{}", a.rows(), a.cols())));
        }
    }
    if a.rows() > limit {
        return Err(Error::Capability { what: format!("permutation scan of size {}", a.rows()), limit });
    }
    Ok(())
}

/// `det 𝓜(AP)` for the column permutation `perm`.
pub fn comparison_determinant(a: &NonnegMatrix, perm: &[usize]) -> Rational {
    determinant(comparison_matrix(&a.permute_columns(perm)).expect("square").as_rat())
}

/// Checks `det 𝓜(AP) ≤ 0` for every column permutation `P`.
pub fn all_determinants_nonpositive(a: &NonnegMatrix) -> Result<SemialgebraicReport> {
    require_square(a, None, SCAN_LIMIT)?;
    let n = a.rows();
    let mut violated = Vec::new();
    let mut boundary = Vec::new();
    for p in permutations(n) {
        let value = comparison_determinant(a, &p);
        if value.is_positive() {
            violated.push(Violation { permutation: p, minor: n, value });
        } else if value.is_zero() {
            boundary.push(p);
        }
    }
    Ok(SemialgebraicReport::from_parts(violated, boundary))
}

/// The six determinant inequalities for `3×3` matrices.
pub fn semialg_3x3(x: &NonnegMatrix) -> Result<SemialgebraicReport> {
    require_square(x, Some(3), 3)?;
    all_determinants_nonpositive(x)
}

/// Permutations in the coset `{p∘σ : σ ∈ V}`, lexicographically sorted.
pub fn klein_coset(p: &[usize]) -> Vec<Vec<usize>> {
    const KLEIN: [[usize; 4]; 4] = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];
    let mut coset: Vec<Vec<usize>> = KLEIN.iter().map(|s| s.iter().map(|&i| p[i]).collect()).collect();
    coset.sort();
    coset
}

/// The six cosets, ordered by their first element.
pub fn klein_cosets() -> Vec<Vec<Vec<usize>>> {
    let mut cosets: Vec<Vec<Vec<usize>>> = Vec::new();
    for p in permutations(4) {
        let c = klein_coset(&p);
        if !cosets.contains(&c) {
            cosets.push(c);
        }
    }
    cosets
}

fn diagonal_product(a: &NonnegMatrix, p: &[usize]) -> Rational {
    p.iter().enumerate().map(|(i, &j)| a.get(i, j)).product()
}

/// The six inequalities `2·Σ_{coset} Π a_{i,p(i)} − perm(A) ≤ 0` for `4×4`
/// matrices. Violations report the first permutation of each failing coset.
pub fn semialg_4x4(a: &NonnegMatrix) -> Result<SemialgebraicReport> {
    require_square(a, Some(4), 4)?;
    let perm = permanent(a)?;
    let mut violated = Vec::new();
    let mut boundary = Vec::new();
    for coset in klein_cosets() {
        let sum: Rational = coset.iter().map(|p| diagonal_product(a, p)).sum();
        let value = sum * Rational::from_integer(2.into()) - &perm;
        if value.is_positive() {
            violated.push(Violation { permutation: coset[0].clone(), minor: 4, value });
        } else if value.is_zero() {
            boundary.extend(coset);
        }
    }
    boundary.sort();
    Ok(SemialgebraicReport::from_parts(violated, boundary))
}

/// Permanent by Ryser's formula
/// `perm(A) = (−1)^n Σ_{S ⊆ cols} (−1)^{|S|} Π_i Σ_{j∈S} a_ij`.
pub fn permanent(a: &NonnegMatrix) -> Result<Rational> {
    if !a.is_square() {
        return Err(Error::Dimension("permanent of a non-square matrix".into()));
    }
    let n = a.rows();
    if n > PERMANENT_LIMIT {
        return Err(Error::Capability { what: format!("permanent of size {n}"), limit: PERMANENT_LIMIT });
    }
    let mut total = Rational::zero();
    for mask in 1u32..(1u32 << n) {
        let mut prod = Rational::one();
        for i in 0..n {
            let row_sum: Rational = (0..n).filter(|j| mask >> j & 1 == 1).map(|j| a.get(i, j)).sum();
            if row_sum.is_zero() {
                prod = Rational::zero();
                break;
            }
            prod *= row_sum;
        }
        if (n - mask.count_ones() as usize).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

/// Membership test for every square size: for each permutation `P`, either
/// some diagonal entry of `𝓜(AP)` vanishes or some leading minor of size at
/// least `min(3, n)` is nonpositive. Permutations failing both are violations,
/// reported with their determinant.
pub fn semialg_general(a: &NonnegMatrix) -> Result<SemialgebraicReport> {
    require_square(a, None, SCAN_LIMIT)?;
    let n = a.rows();
    let from = 3.min(n);
    let mut violated = Vec::new();
    let mut boundary = Vec::new();
    for p in permutations(n) {
        let z = comparison_matrix(&a.permute_columns(&p))?;
        let minors = leading_minors(z.as_rat());
        let det = minors[n - 1].clone();
        if det.is_zero() {
            boundary.push(p.clone());
        }
        let diag_positive = (0..n).all(|i| z.get(i, i).is_positive());
        if diag_positive && minors[from - 1..].iter().all(Signed::is_positive) {
            violated.push(Violation { permutation: p, minor: n, value: det });
        }
    }
    Ok(SemialgebraicReport::from_parts(violated, boundary))
}

/// First permutation (lexicographically) with `det 𝓜(AP) = 0`. For strictly
/// positive matrices on the boundary of the nonmaximal set one always exists.
pub fn boundary_certificate(a: &NonnegMatrix) -> Result<Option<Vec<usize>>> {
    require_square(a, None, SCAN_LIMIT)?;
    Ok(permutations(a.rows()).find(|p| comparison_determinant(a, p).is_zero()))
}
