//! Equiangular lines, mutually unbiased bases and psd witnesses.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lopsided::is_lopsided;
use crate::matrix::{numerical_rank, rational_rank, NonnegMatrix, PhasedMatrix};
use crate::rank::{decide_nonmaximal, RankDecision};
use crate::rational::{ceil_sqrt, int, rationalize, Rational, RATIONALIZE_TOL};

/// Lower bound on the eigenvalues of a psd witness.
pub const PSD_TOL: f64 = 1e-8;
/// Allowed deviation between witness moduli and the target matrix.
pub const MODULUS_TOL: f64 = 1e-9;

/// `A^α_n`: ones on the diagonal, `α` elsewhere.
pub fn equiangular_matrix(n: usize, alpha: &Rational) -> Result<NonnegMatrix> {
    if *alpha < Rational::zero() || *alpha > Rational::one() {
        return Err(Error::Domain(format!("α = {alpha} outside [0, 1]")));
    }
    NonnegMatrix::from_fn(n, n, |i, j| if i == j { Rational::one() } else { alpha.clone() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquiangularBound {
    pub max_lines: usize,
    /// Maximality certificate for `A^α_{d+1}`.
    pub certificate: RankDecision,
}

/// For `α < 1/d` at most `d` equiangular lines with angle `α` fit in `C^d`: every
/// column of `A^α_{d+1}` is lopsided (`1 > d·α`), so its phaseless rank is `d+1`.
pub fn small_angle_equiangular_max(d: usize, alpha: &Rational) -> Result<EquiangularBound> {
    if d == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    if alpha * int(d as i64) >= Rational::one() {
        return Err(Error::Domain(format!("α = {alpha} is not below 1/{d}")));
    }
    let a = equiangular_matrix(d + 1, alpha)?;
    if !(0..d + 1).all(|j| is_lopsided(&a.column(j))) {
        return Err(Error::Inconsistent("columns of A^α should be lopsided".into()));
    }
    let certificate = decide_nonmaximal(&a)?;
    if certificate.is_nonmaximal() {
        return Err(Error::Inconsistent("lopsided columns yet nonmaximal".into()));
    }
    certificate.verify(&a)?;
    Ok(EquiangularBound { max_lines: d, certificate })
}

/// `B_d^k ∘ B_d^k`, exact: identity blocks on the diagonal, constant `1/d` elsewhere.
pub fn mub_matrix_squared(d: usize, k: usize) -> Result<NonnegMatrix> {
    if d < 2 || k < 1 {
        return Err(Error::Domain(format!("need d ≥ 2 and k ≥ 1, got d = {d}, k = {k}")));
    }
    let off = Rational::new(1.into(), (d as i64).into());
    NonnegMatrix::from_fn(k * d, k * d, |i, j| {
        if i / d != j / d {
            off.clone()
        } else if i == j {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

/// `B_d^k`, with `1/√d` exact when `d` is a perfect square and rationalized otherwise.
pub fn mub_matrix(d: usize, k: usize) -> Result<NonnegMatrix> {
    let squared = mub_matrix_squared(d, k)?;
    let root = ceil_sqrt(d as u64) as usize;
    let off = if root * root == d {
        Rational::new(1.into(), (root as i64).into())
    } else {
        rationalize(1.0 / (d as f64).sqrt(), RATIONALIZE_TOL)
    };
    NonnegMatrix::from_fn(squared.rows(), squared.cols(), |i, j| {
        if squared.get(i, j).is_zero() || squared.get(i, j).is_one() {
            squared.get(i, j).clone()
        } else {
            off.clone()
        }
    })
}

/// `⌈√rank(B∘B)⌉` from the exact squared matrix.
pub fn mub_lower_bound(d: usize, k: usize) -> Result<usize> {
    Ok(ceil_sqrt(rational_rank(mub_matrix_squared(d, k)?.as_rat()) as u64) as usize)
}

/// A candidate Gram matrix with the dimension it is claimed to live in.
#[derive(Debug, Clone, PartialEq)]
pub struct GramWitness {
    pub gram: PhasedMatrix,
    pub ambient_dim: usize,
}

impl GramWitness {
    /// Gram matrix `G_ij = ⟨v_i, v_j⟩` of complex vectors.
    pub fn from_vectors(vectors: &[DVector<Complex64>]) -> Result<Self> {
        let n = vectors.len();
        let dim = vectors.first().map_or(0, |v| v.len());
        if n == 0 || vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::Dimension("vectors must be nonempty and of equal length".into()));
        }
        let g = DMatrix::from_fn(n, n, |i, j| vectors[i].dotc(&vectors[j]));
        Ok(Self { gram: PhasedMatrix::from_complex(&g, RATIONALIZE_TOL)?, ambient_dim: dim })
    }
}

/// Certifies `rank_θ^psd(A) ≤ d`: the Gram candidate must match `A` in modulus,
/// be Hermitian and positive semidefinite, and have rank at most `d`.
pub fn verify_psd_witness(w: &GramWitness, a: &NonnegMatrix, d: usize) -> Result<bool> {
    if w.gram.modulus_deviation(a) > MODULUS_TOL {
        return Err(Error::WitnessInvalid("Gram moduli differ from the matrix".into()));
    }
    let g = w.gram.to_complex();
    let n = g.nrows();
    let scale = g.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let hermitian = (0..n).all(|i| (0..n).all(|j| (g[(i, j)] - g[(j, i)].conj()).norm() <= MODULUS_TOL * scale));
    if !hermitian {
        return Ok(false);
    }
    let eig = g.symmetric_eigenvalues();
    if eig.iter().any(|&l| l < -PSD_TOL) {
        return Ok(false);
    }
    Ok(numerical_rank(&w.gram, PSD_TOL) <= d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::lower_bound_hadamard;
    use crate::rational::ratio;

    pub(crate) fn mub_pair_d2() -> GramWitness {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = |a: f64, b: f64| DVector::from_vec(vec![Complex64::new(a, 0.0), Complex64::new(b, 0.0)]);
        GramWitness::from_vectors(&[v(1.0, 0.0), v(0.0, 1.0), v(s, s), v(s, -s)]).unwrap()
    }

    #[test]
    fn equiangular_examples() {
        assert_eq!(equiangular_matrix(3, &int(0)).unwrap(), NonnegMatrix::identity(3));
        assert_eq!(equiangular_matrix(3, &int(1)).unwrap(), NonnegMatrix::ones(3, 3));
        let half = equiangular_matrix(4, &ratio(1, 2)).unwrap();
        assert_eq!(half.get(0, 0), &int(1));
        assert_eq!(half.get(1, 3), &ratio(1, 2));
        assert!(equiangular_matrix(3, &int(2)).is_err());
    }

    #[test]
    fn small_angle_bounds() {
        assert_eq!(small_angle_equiangular_max(3, &ratio(3, 10)).unwrap().max_lines, 3);
        assert_eq!(small_angle_equiangular_max(2, &ratio(1, 4)).unwrap().max_lines, 2);
        assert!(matches!(small_angle_equiangular_max(5, &ratio(1, 5)), Err(Error::Domain(_))));
    }

    #[test]
    fn mub_matrices() {
        assert_eq!(mub_matrix(2, 1).unwrap(), NonnegMatrix::identity(2));
        let b = mub_matrix(2, 2).unwrap();
        assert_eq!(b.rows(), 4);
        assert!((crate::rational::to_f64(b.get(0, 2)) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(mub_matrix(4, 2).unwrap().get(0, 5), &ratio(1, 2));
        let sq = mub_matrix_squared(3, 2).unwrap();
        assert_eq!(sq.get(0, 4), &ratio(1, 3));
        // Each diagonal block of B∘B is I_3 and each off-diagonal block is J_3/3.
        assert_eq!(rational_rank(sq.as_rat()), 5);
        assert_eq!(mub_lower_bound(3, 2).unwrap(), 3);
    }

    #[test]
    fn psd_witnesses() {
        let w = mub_pair_d2();
        assert!(verify_psd_witness(&w, &mub_matrix(2, 2).unwrap(), 2).unwrap());
        assert!(lower_bound_hadamard(&mub_matrix_squared(2, 2).unwrap()) <= 2);

        let j3 = GramWitness { gram: PhasedMatrix::zero_phase(NonnegMatrix::ones(3, 3)), ambient_dim: 1 };
        assert!(verify_psd_witness(&j3, &NonnegMatrix::ones(3, 3), 1).unwrap());

        let a = equiangular_matrix(4, &ratio(1, 2)).unwrap();
        let flat = GramWitness { gram: PhasedMatrix::zero_phase(a.clone()), ambient_dim: 4 };
        assert!(!verify_psd_witness(&flat, &a, 2).unwrap());

        assert!(verify_psd_witness(&j3, &NonnegMatrix::identity(3), 1).is_err());
    }
}
