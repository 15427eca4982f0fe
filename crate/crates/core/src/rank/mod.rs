//! Deciding and bounding the phaseless rank.
//!
//! [`decide_nonmaximal`] is the main entry point: it solves the nonmaximality
//! LP and returns either weights `λ` with an equimodular witness, or a column
//! permutation `P` and a positive vector `d` with `𝓜(AP)·d > 0`.

mod bounds;
mod oracles;
mod search;
mod signless;

pub use bounds::{
    bracket, lower_bound_hadamard, signless_lower_bound, typical_rank_bounds, upper_bound_patching, Bracket, Effort,
    LowerSource, PatchingBound, UpperSource,
};
pub use oracles::{decide_by_permutations, decide_by_submatrices, find_m_matrix_permutation, PERMUTATION_LIMIT};
pub(crate) use oracles::{int_det, integer_rows};
pub use search::{phase_local_search, SEARCH_ITERATIONS};
pub use signless::{signless_rank_bruteforce, SIGNLESS_FREE_LIMIT};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lopsided::{close_polygon, is_lopsided, WeightVector};
use crate::lp::{lp_feasible, nonmax_system, nonmax_system_with_margin, FarkasCertificate, LinearProgram, LpOutcome};
use crate::matrix::{comparison_matrix, NonnegMatrix, PhasedMatrix};
use crate::rational::{rationalize, to_f64, Rational, RATIONALIZE_TOL};

/// Bound on `|Σ_k λ_k B_kj|` for a witness column, relative to `max(1, Σ_k λ_k A_kj)`.
pub const WITNESS_RESIDUAL_TOL: f64 = 1e-9;
/// Singular value threshold used when counting the rank of a witness.
pub const WITNESS_RANK_TOL: f64 = 1e-8;
/// Entry perturbation used to flag verdicts that sit on the feasibility boundary.
pub const BOUNDARY_DELTA: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum RankDecision {
    /// `rank_θ(A) < min(n, m)`. `lambda` weights the rows of `A` (its columns
    /// when `transposed`), and `witness ∈ Ω(A)` has `λᵀ·witness ≈ 0` in that
    /// orientation.
    Nonmaximal { lambda: WeightVector, witness: PhasedMatrix, transposed: bool },
    /// `rank_θ(A) = min(n, m)`. With `B` the matrix oriented to have at most as
    /// many rows as columns, `columns` picks a square block of `B` and
    /// `permutation` reorders it (position `k` holds block column
    /// `permutation[k]`) so that `𝓜(block)·scaling > 0`. For rectangular input
    /// the infeasibility certificate of the full system is attached.
    Maximal {
        columns: Vec<usize>,
        permutation: Vec<usize>,
        scaling: Vec<Rational>,
        farkas: Option<FarkasCertificate>,
        transposed: bool,
    },
}

impl RankDecision {
    pub fn is_nonmaximal(&self) -> bool {
        matches!(self, RankDecision::Nonmaximal { .. })
    }

    /// Re-checks the attached certificate against `a`.
    pub fn verify(&self, a: &NonnegMatrix) -> Result<()> {
        let fail = |msg: &str| Err(Error::WitnessInvalid(msg.into()));
        match self {
            RankDecision::Nonmaximal { lambda, witness, transposed } => {
                if !witness.is_equimodular_with(a) {
                    return fail("witness moduli differ from the matrix");
                }
                let (b, w) =
                    if *transposed { (a.transpose(), witness.transpose()) } else { (a.clone(), witness.clone()) };
                if lambda.len() != b.rows() {
                    return fail("weight vector has the wrong length");
                }
                if !nonmax_system(&b).is_satisfied_by(lambda.as_slice()) {
                    return fail("weights violate the nonmaximality system");
                }
                let residuals = column_residuals(&w, lambda);
                for (j, r) in residuals.iter().enumerate() {
                    let scale: f64 = (0..b.rows()).map(|k| to_f64(&(&lambda.as_slice()[k] * b.get(k, j)))).sum();
                    if *r > WITNESS_RESIDUAL_TOL * scale.max(1.0) {
                        return Err(Error::WitnessInvalid(format!("column {j} residual {r:e}")));
                    }
                }
                Ok(())
            }
            RankDecision::Maximal { columns, permutation, scaling, farkas, transposed } => {
                let b = if *transposed { a.transpose() } else { a.clone() };
                if columns.len() != b.rows() || columns.iter().any(|&c| c >= b.cols()) {
                    return fail("column selection does not give a square block");
                }
                let mut seen = vec![false; columns.len()];
                for &p in permutation {
                    if p >= seen.len() || std::mem::replace(&mut seen[p], true) {
                        return fail("not a permutation");
                    }
                }
                if permutation.len() != columns.len() {
                    return fail("not a permutation");
                }
                let block = b.select_columns(columns).permute_columns(permutation);
                let z = comparison_matrix(&block)?;
                if scaling.len() != z.dim() || scaling.iter().any(Signed::is_negative) {
                    return fail("scaling must be a nonnegative vector of matching length");
                }
                if !z.as_rat().mul_vec(scaling).iter().all(Signed::is_positive) {
                    return fail("comparison matrix times scaling is not positive");
                }
                if let Some(f) = farkas {
                    if !nonmax_system(&b).is_refuted_by(f) {
                        return fail("Farkas certificate does not refute the system");
                    }
                }
                Ok(())
            }
        }
    }
}

/// `|Σ_k λ_k w_kj|` for every column `j`.
pub fn column_residuals(w: &PhasedMatrix, lambda: &WeightVector) -> Vec<f64> {
    let lam: Vec<f64> = lambda.as_slice().iter().map(to_f64).collect();
    (0..w.cols())
        .map(|j| (0..w.rows()).map(|k| w.entry(k, j) * lam[k]).sum::<num_complex::Complex64>().norm())
        .collect()
}

/// Orients `a` so that rows ≤ columns; the flag says whether it was transposed.
pub(crate) fn oriented(a: &NonnegMatrix) -> (NonnegMatrix, bool) {
    if a.rows() > a.cols() {
        (a.transpose(), true)
    } else {
        (a.clone(), false)
    }
}

/// Phases for column `values` (all ≥ 0) summing to zero, falling back to the
/// collinear closure when rounding makes a tight list look lopsided.
fn close_column(values: &[Rational]) -> Vec<f64> {
    let floats: Vec<f64> = values.iter().map(to_f64).collect();
    match close_polygon(&floats) {
        Ok(p) => p.0,
        Err(_) => {
            let top = (0..values.len()).fold(0, |best, k| if values[k] > values[best] { k } else { best });
            (0..values.len())
                .map(|k| if k == top || values[k].is_zero() { 0.0 } else { std::f64::consts::PI })
                .collect()
        }
    }
}

/// An element of `Ω(A)` whose rows are annihilated by `λ`.
///
/// Each column's weighted moduli `(λ_k A_kj)_k` are closed into a polygon; the
/// column is then rotated so its first nonzero entry is real and positive.
pub fn build_witness(a: &NonnegMatrix, lambda: &WeightVector) -> Result<PhasedMatrix> {
    let (n, m) = (a.rows(), a.cols());
    if lambda.len() != n {
        return Err(Error::Dimension(format!("{} weights for {n} rows", lambda.len())));
    }
    let mut phases = vec![0.0; n * m];
    for j in 0..m {
        let weighted: Vec<Rational> = (0..n).map(|k| &lambda.as_slice()[k] * a.get(k, j)).collect();
        if is_lopsided(&weighted) {
            let top = (0..n).fold(0, |best, k| if weighted[k] > weighted[best] { k } else { best });
            return Err(Error::Lopsided { index: top, column: Some(j) });
        }
        let col = close_column(&weighted);
        let rot = (0..n).find(|&k| !a.get(k, j).is_zero()).map_or(0.0, |k| col[k]);
        for k in 0..n {
            phases[k * m + j] = col[k] - rot;
        }
    }
    PhasedMatrix::new(a.clone(), phases)
}

/// Decides whether `rank_θ(A) < min(n, m)`, with a certificate either way.
pub fn decide_nonmaximal(a: &NonnegMatrix) -> Result<RankDecision> {
    let (b, transposed) = oriented(a);
    let n = b.rows();
    if let Some(row) = b.zero_row() {
        let lambda = WeightVector::indicator(n, row);
        return nonmaximal_decision(&b, lambda, transposed);
    }
    let system = nonmax_system(&b);
    // The barycenter is the most symmetric choice when it works.
    let uniform = WeightVector::uniform(n);
    if system.is_satisfied_by(uniform.as_slice()) {
        return nonmaximal_decision(&b, uniform, transposed);
    }
    match lp_feasible(&system) {
        LpOutcome::Feasible(x) => nonmaximal_decision(&b, WeightVector::new(x)?, transposed),
        LpOutcome::Infeasible(farkas) => {
            if b.is_square() {
                let (permutation, scaling) = maximal_square_certificate(&b)?;
                return Ok(RankDecision::Maximal {
                    columns: (0..n).collect(),
                    permutation,
                    scaling,
                    farkas: None,
                    transposed,
                });
            }
            // Some square column block is already maximal; certify that one.
            for columns in crate::combinatorics::combinations(b.cols(), n) {
                let block = b.select_columns(&columns);
                if !lp_feasible(&nonmax_system(&block)).is_feasible() {
                    let (permutation, scaling) = maximal_square_certificate(&block)?;
                    return Ok(RankDecision::Maximal {
                        columns,
                        permutation,
                        scaling,
                        farkas: Some(farkas),
                        transposed,
                    });
                }
            }
            Err(Error::Inconsistent("infeasible system but every square block is nonmaximal".into()))
        }
    }
}

fn nonmaximal_decision(b: &NonnegMatrix, lambda: WeightVector, transposed: bool) -> Result<RankDecision> {
    let w = build_witness(b, &lambda)?;
    let witness = if transposed { w.transpose() } else { w };
    Ok(RankDecision::Nonmaximal { lambda, witness, transposed })
}

/// `(P, d)` for a square matrix of maximal phaseless rank.
///
/// A basic solution of `y ≥ 0, Σ y_(i,k) row_(i,k) ≥ 1` over the rows of the
/// nonmaximality system (row `(i, k)` tests column `i` at position `k`) uses at
/// most `n` rows, one per position. When those rows use distinct columns they
/// spell out the permutation and `y` restricted to them is the scaling.
/// Otherwise the permutations are searched directly.
fn maximal_square_certificate(b: &NonnegMatrix) -> Result<(Vec<usize>, Vec<Rational>)> {
    let n = b.rows();
    let mut lp = LinearProgram::nonnegative(n * n);
    for l in 0..n {
        let coeffs = (0..n * n)
            .map(|v| {
                let (i, k) = (v / n, v % n);
                if l == k {
                    b.get(k, i).clone()
                } else {
                    -b.get(l, i)
                }
            })
            .collect();
        lp.add_ge(coeffs, Rational::one())?;
    }
    if let LpOutcome::Feasible(y) = lp_feasible(&lp) {
        let mut perm = vec![usize::MAX; n];
        let mut scaling = vec![Rational::zero(); n];
        let mut ok = true;
        for (v, val) in y.iter().enumerate() {
            if val.is_positive() {
                let (i, k) = (v / n, v % n);
                if perm[k] != usize::MAX {
                    ok = false;
                    break;
                }
                perm[k] = i;
                scaling[k] = val.clone();
            }
        }
        if ok && perm.iter().all(|&p| p != usize::MAX) {
            let mut used = perm.clone();
            used.sort_unstable();
            used.dedup();
            if used.len() == n {
                let z = comparison_matrix(&b.permute_columns(&perm))?;
                if z.as_rat().mul_vec(&scaling).iter().all(Signed::is_positive) {
                    return Ok((perm, scaling));
                }
            }
        }
    }
    find_m_matrix_permutation(b)?
        .ok_or_else(|| Error::Inconsistent("infeasible system but no permutation gives an M-matrix".into()))
}

/// Three-way verdict for data known only up to small entry perturbations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RobustVerdict {
    Nonmaximal,
    Maximal,
    /// Perturbing the entries by `delta` can flip the verdict.
    BoundaryUncertain,
}

/// Verdict for `a` with the uncertainty flag for entry perturbations up to
/// `delta`. Since `Σλ = 1`, such perturbations move each constraint by at most
/// `delta`, so the system is solved with margins `−delta` and `+delta`.
pub fn robust_verdict(a: &NonnegMatrix, delta: f64) -> RobustVerdict {
    let (b, _) = oriented(a);
    let d = rationalize(delta.abs(), delta.abs() * 1e-3);
    let tight = lp_feasible(&nonmax_system_with_margin(&b, &-d.clone())).is_feasible();
    if tight {
        return RobustVerdict::Nonmaximal;
    }
    let loose = lp_feasible(&nonmax_system_with_margin(&b, &d)).is_feasible();
    if loose {
        RobustVerdict::BoundaryUncertain
    } else {
        RobustVerdict::Maximal
    }
}

/// Membership of a point in the (unlog) amoeba of the variety of `n×m`
/// matrices with vanishing maximal minors, i.e. nonmaximal phaseless rank.
///
/// In log scale the coordinates are exponentiated first, so zero entries cannot
/// be expressed there.
pub fn amoeba_membership(point: &[f64], n: usize, m: usize, log_scale: bool) -> Result<bool> {
    if n == 0 || m == 0 || point.len() != n * m {
        return Err(Error::Dimension(format!("{} coordinates for a {n}x{m} matrix", point.len())));
    }
    if point.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("coordinates must be finite (zeros have no logarithm)".into()));
    }
    let values: Vec<f64> = if log_scale { point.iter().map(|x| x.exp()).collect() } else { point.to_vec() };
    let a = NonnegMatrix::from_f64(n, m, &values, RATIONALIZE_TOL)?;
    Ok(decide_nonmaximal(&a)?.is_nonmaximal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::numerical_rank;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    pub(crate) fn d4() -> NonnegMatrix {
        NonnegMatrix::from_i64(&[&[0, 1, 1, 1], &[1, 0, 1, 1], &[1, 1, 0, 1], &[1, 1, 1, 0]]).unwrap()
    }

    pub(crate) fn circulant(x: Rational, y: Rational) -> NonnegMatrix {
        let one = Rational::one();
        let rows = [[one.clone(), x.clone(), y.clone()], [y.clone(), one.clone(), x.clone()], [x, y, one]];
        NonnegMatrix::new(3, 3, rows.into_iter().flatten().collect()).unwrap()
    }

    #[test]
    fn derangement_is_nonmaximal_with_uniform_weights() {
        let a = d4();
        let d = decide_nonmaximal(&a).unwrap();
        d.verify(&a).unwrap();
        match d {
            RankDecision::Nonmaximal { lambda, witness, .. } => {
                assert_eq!(lambda, WeightVector::uniform(4));
                assert!(numerical_rank(&witness, WITNESS_RANK_TOL) <= 3);
            }
            _ => panic!("D4 must be nonmaximal"),
        }
    }

    #[test]
    fn identity_is_maximal_with_identity_permutation() {
        let a = NonnegMatrix::identity(3);
        match decide_nonmaximal(&a).unwrap() {
            RankDecision::Maximal { permutation, scaling, farkas, .. } => {
                assert_eq!(permutation, vec![0, 1, 2]);
                assert_eq!(scaling, vec![int(1); 3]);
                assert!(farkas.is_none());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ones_and_zero_rows() {
        assert!(decide_nonmaximal(&NonnegMatrix::ones(3, 3)).unwrap().is_nonmaximal());
        let z = NonnegMatrix::from_i64(&[&[1, 2, 3], &[0, 0, 0], &[4, 5, 6]]).unwrap();
        match decide_nonmaximal(&z).unwrap() {
            RankDecision::Nonmaximal { lambda, .. } => assert_eq!(lambda, WeightVector::indicator(3, 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn witness_for_all_ones_pair() {
        let a = NonnegMatrix::ones(2, 2);
        let w = build_witness(&a, &WeightVector::uniform(2)).unwrap();
        assert_eq!(w.phase(0, 0), 0.0);
        assert_eq!(w.phase(0, 1), 0.0);
        assert!((w.phase(1, 0) - PI).abs() < 1e-12);
        assert!((w.phase(1, 1) - PI).abs() < 1e-12);
        assert_eq!(numerical_rank(&w, WITNESS_RANK_TOL), 1);
    }

    #[test]
    fn witness_rejects_lopsided_column() {
        let a = NonnegMatrix::from_i64(&[&[1, 1], &[1, 5]]).unwrap();
        assert_eq!(
            build_witness(&a, &WeightVector::uniform(2)).unwrap_err(),
            Error::Lopsided { index: 1, column: Some(1) }
        );
    }

    #[test]
    fn circulant_witness() {
        let a = circulant(int(2), int(2));
        let d = decide_nonmaximal(&a).unwrap();
        d.verify(&a).unwrap();
        let RankDecision::Nonmaximal { lambda, witness, .. } = d else { panic!() };
        assert!(column_residuals(&witness, &lambda).iter().all(|r| *r <= 1e-9));
    }

    #[test]
    fn rectangular_orientation() {
        // Lopsided 3x3 block, so the 3x5 matrix is maximal.
        let a = NonnegMatrix::from_i64(&[&[9, 1, 1, 1, 1], &[1, 9, 1, 1, 1], &[1, 1, 9, 1, 1]]).unwrap();
        let d = decide_nonmaximal(&a).unwrap();
        d.verify(&a).unwrap();
        assert!(!d.is_nonmaximal());
        let t = decide_nonmaximal(&a.transpose()).unwrap();
        t.verify(&a.transpose()).unwrap();
        assert!(matches!(t, RankDecision::Maximal { transposed: true, .. }));
        let ones = NonnegMatrix::ones(5, 3);
        let d = decide_nonmaximal(&ones).unwrap();
        d.verify(&ones).unwrap();
        assert!(matches!(d, RankDecision::Nonmaximal { transposed: true, .. }));
    }

    #[test]
    fn robust_verdicts() {
        assert_eq!(robust_verdict(&d4(), BOUNDARY_DELTA), RobustVerdict::Nonmaximal);
        assert_eq!(robust_verdict(&NonnegMatrix::identity(3), BOUNDARY_DELTA), RobustVerdict::Maximal);
        // |x − y| = 1 is the boundary of the circulant region.
        assert_eq!(robust_verdict(&circulant(int(2), int(1)), BOUNDARY_DELTA), RobustVerdict::BoundaryUncertain);
        let inside = circulant(ratio(1, 2), ratio(1, 2));
        assert_eq!(robust_verdict(&inside, BOUNDARY_DELTA), RobustVerdict::BoundaryUncertain);
    }

    #[test]
    fn amoeba_examples() {
        let ones = [1.0; 9];
        assert!(amoeba_membership(&ones, 3, 3, false).unwrap());
        assert!(amoeba_membership(&[0.0; 9], 3, 3, true).unwrap());
        let id = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
        assert!(!amoeba_membership(&id, 3, 3, false).unwrap());
        let d4: Vec<f64> = d4().entries().iter().map(to_f64).collect();
        assert!(amoeba_membership(&d4, 4, 4, false).unwrap());
        let logs: Vec<f64> = d4.iter().map(|x| x.ln()).collect();
        assert!(amoeba_membership(&logs, 4, 4, true).is_err());
        assert!(amoeba_membership(&[1.0; 8], 3, 3, false).is_err());
    }

    fn small_matrix(max_dim: usize) -> impl Strategy<Value = NonnegMatrix> {
        (1..=max_dim, 1..=max_dim).prop_flat_map(|(n, m)| {
            prop::collection::vec(0i64..6, n * m)
                .prop_map(move |v| NonnegMatrix::new(n, m, v.into_iter().map(int).collect()).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn decisions_always_verify(a in small_matrix(4)) {
            let d = decide_nonmaximal(&a).unwrap();
            prop_assert!(d.verify(&a).is_ok(), "{:?}", d.verify(&a));
            if let RankDecision::Nonmaximal { witness, .. } = &d {
                prop_assert!(numerical_rank(witness, WITNESS_RANK_TOL) < a.min_dim());
            }
        }

        #[test]
        fn transpose_invariance(a in small_matrix(4)) {
            prop_assert_eq!(
                decide_nonmaximal(&a).unwrap().is_nonmaximal(),
                decide_nonmaximal(&a.transpose()).unwrap().is_nonmaximal()
            );
        }
    }
}
