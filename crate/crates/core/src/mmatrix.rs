//! Nonsingular M-matrix tests for matrices with nonpositive off-diagonal.
//!
//! Five equivalent characterizations are implemented independently so they can
//! be cross-checked: a positive vector `x ≥ 0` with `Zx > 0`, a dominance
//! scaling `D` with `ZD` strictly diagonally dominant, positive leading principal
//! minors, positive diagonal with positive leading minors of size at least three,
//! and positivity of the real spectrum.

use num_traits::{One, Signed, Zero};

use crate::lp::{lp_feasible, LinearProgram, LpOutcome};
use crate::matrix::{leading_minors, ComparisonMatrix};
use crate::rational::{to_f64, Rational};

/// Tolerance on the smallest real part for the floating eigenvalue test.
pub const EIGEN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Method {
    PositiveVector,
    LeadingMinors,
    #[default]
    ReducedMinors,
    Eigenvalue,
    DominanceScaling,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::PositiveVector,
        Method::LeadingMinors,
        Method::ReducedMinors,
        Method::Eigenvalue,
        Method::DominanceScaling,
    ];
}

#[derive(Debug, Clone, PartialEq)]
pub enum MCertificate {
    /// `x ≥ 0` with `Z·x > 0`.
    PositiveVector(Vec<Rational>),
    /// `d > 0` with `Z·diag(d)` strictly diagonally dominant.
    Scaling(Vec<Rational>),
    /// Leading principal minors `det_1, …, det_n`.
    Minors(Vec<Rational>),
    /// Smallest real part of the spectrum (floating, never a proof).
    MinRealPart(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MMatrixReport {
    pub verdict: bool,
    pub method: Method,
    pub certificate: Option<MCertificate>,
}

impl MMatrixReport {
    /// Re-checks an attached exact certificate against `z`. Float-only reports
    /// and negative verdicts carry nothing to check and return `true`.
    pub fn verify(&self, z: &ComparisonMatrix) -> bool {
        if !self.verdict {
            return true;
        }
        match &self.certificate {
            Some(MCertificate::PositiveVector(x)) => {
                x.iter().all(|v| !v.is_negative()) && z.as_rat().mul_vec(x).iter().all(Signed::is_positive)
            }
            Some(MCertificate::Scaling(d)) => is_dominance_scaling(z, d),
            Some(MCertificate::Minors(m)) => m == &leading_minors(z.as_rat()) && m.iter().all(Signed::is_positive),
            Some(MCertificate::MinRealPart(_)) | None => true,
        }
    }
}

/// Leading principal minors of `z`, exact.
pub fn leading_principal_minors(z: &ComparisonMatrix) -> Vec<Rational> {
    leading_minors(z.as_rat())
}

/// Row-wise strict diagonal dominance of `Z·diag(d)` with `d > 0`.
pub fn is_dominance_scaling(z: &ComparisonMatrix, d: &[Rational]) -> bool {
    let n = z.dim();
    if d.len() != n || d.iter().any(|v| !v.is_positive()) {
        return false;
    }
    (0..n).all(|i| {
        let off: Rational = (0..n).filter(|&j| j != i).map(|j| z.get(i, j).abs() * &d[j]).sum();
        z.get(i, i).abs() * &d[i] > off
    })
}

fn positive_vector_lp(z: &ComparisonMatrix, lower: Option<Rational>) -> LinearProgram {
    let n = z.dim();
    let mut lp = LinearProgram::nonnegative(n);
    for i in 0..n {
        lp.add_ge(z.as_rat().row(i).to_vec(), Rational::one()).expect("n coefficients");
    }
    if let Some(lb) = lower {
        for i in 0..n {
            let e = (0..n).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect();
            lp.add_ge(e, lb.clone()).expect("n coefficients");
        }
    }
    lp
}

/// Smallest real part over the spectrum of `z`, in double precision. For a
/// Z-matrix this is its smallest real eigenvalue.
pub fn min_real_eigenvalue(z: &ComparisonMatrix) -> f64 {
    let m = z.as_rat().to_f64();
    m.complex_eigenvalues().iter().map(|c| c.re).fold(f64::INFINITY, f64::min)
}

pub fn is_nonsingular_m_matrix(z: &ComparisonMatrix, method: Method) -> MMatrixReport {
    let n = z.dim();
    let diag_positive = (0..n).all(|i| z.get(i, i).is_positive());
    let (verdict, certificate) = match method {
        Method::LeadingMinors => {
            let minors = leading_principal_minors(z);
            (minors.iter().all(Signed::is_positive), Some(MCertificate::Minors(minors)))
        }
        Method::ReducedMinors => {
            if !diag_positive {
                (false, None)
            } else {
                // For n ≤ 2 the condition on minors of size ≥ 3 is vacuous, so the
                // full determinant is checked instead.
                let minors = leading_principal_minors(z);
                let from = 3.min(n);
                let ok = minors[from - 1..].iter().all(Signed::is_positive);
                (ok, Some(MCertificate::Minors(minors)))
            }
        }
        Method::Eigenvalue => {
            let min = min_real_eigenvalue(z);
            let scale = z.as_rat().entries().iter().map(|v| to_f64(v).abs()).fold(1.0, f64::max);
            (min > EIGEN_TOL * scale, Some(MCertificate::MinRealPart(min)))
        }
        Method::PositiveVector => match lp_feasible(&positive_vector_lp(z, None)) {
            LpOutcome::Feasible(x) => (true, Some(MCertificate::PositiveVector(x))),
            LpOutcome::Infeasible(_) => (false, None),
        },
        Method::DominanceScaling => {
            if !diag_positive {
                (false, None)
            } else {
                match lp_feasible(&positive_vector_lp(z, Some(Rational::one()))) {
                    LpOutcome::Feasible(d) => (true, Some(MCertificate::Scaling(d))),
                    LpOutcome::Infeasible(_) => (false, None),
                }
            }
        }
    };
    MMatrixReport { verdict, method, certificate }
}

/// Runs every method and returns the reports in [`Method::ALL`] order.
pub fn all_methods(z: &ComparisonMatrix) -> Vec<MMatrixReport> {
    Method::ALL.iter().map(|&m| is_nonsingular_m_matrix(z, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{comparison_matrix, NonnegMatrix, RatMatrix};
    use crate::rational::int;

    fn z(rows: &[&[i64]]) -> ComparisonMatrix {
        ComparisonMatrix::from_z_matrix(RatMatrix::from_i64(rows).unwrap()).unwrap()
    }

    #[test]
    fn two_by_two_examples() {
        let good = z(&[&[2, -1], &[-1, 2]]);
        for r in all_methods(&good) {
            assert!(r.verdict, "{:?}", r.method);
            assert!(r.verify(&good));
        }
        assert_eq!(leading_principal_minors(&good), vec![int(2), int(3)]);

        let singular = z(&[&[1, -1], &[-1, 1]]);
        for r in all_methods(&singular) {
            assert!(!r.verdict, "{:?}", r.method);
        }
        assert_eq!(leading_principal_minors(&singular), vec![int(1), int(0)]);
    }

    #[test]
    fn reduced_minors_checks_det_for_small_sizes() {
        let bad = z(&[&[1, -2], &[-2, 1]]);
        assert!(!is_nonsingular_m_matrix(&bad, Method::ReducedMinors).verdict);
        let zero_diag = z(&[&[0, 0], &[0, 1]]);
        assert!(!is_nonsingular_m_matrix(&zero_diag, Method::ReducedMinors).verdict);
    }

    #[test]
    fn identity_minors() {
        let id = ComparisonMatrix::from_z_matrix(RatMatrix::identity(3)).unwrap();
        assert_eq!(leading_principal_minors(&id), vec![int(1); 3]);
    }

    #[test]
    fn derangement_never_m_matrix() {
        let d4 = NonnegMatrix::from_i64(&[&[0, 1, 1, 1], &[1, 0, 1, 1], &[1, 1, 0, 1], &[1, 1, 1, 0]]).unwrap();
        let mut perm = [0usize, 1, 2, 3];
        loop {
            let m = comparison_matrix(&d4.permute_columns(&perm)).unwrap();
            for r in all_methods(&m) {
                assert!(!r.verdict, "{perm:?} {:?}", r.method);
            }
            if !crate::combinatorics::next_permutation(&mut perm) {
                break;
            }
        }
    }

    #[test]
    fn dominance_scaling_certificate_is_checked() {
        let m = z(&[&[3, -2, 0], &[-1, 3, -1], &[0, -2, 3]]);
        let r = is_nonsingular_m_matrix(&m, Method::DominanceScaling);
        assert!(r.verdict);
        if let Some(MCertificate::Scaling(d)) = &r.certificate {
            assert!(is_dominance_scaling(&m, d));
        } else {
            panic!("missing scaling");
        }
        assert!(!is_dominance_scaling(&m, &[int(1), int(0), int(1)]));
    }
}
