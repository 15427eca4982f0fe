//! Matrix containers shared by every other module.
//!
//! Exact data lives in [`RatMatrix`] / [`NonnegMatrix`] (dense, row-major,
//! arbitrary-precision rationals). Complex members of an equimodular class are
//! [`PhasedMatrix`] values: an exact modulus plus floating phases.

mod exact;
mod io;
mod numeric;

pub use exact::{determinant, leading_minors, rational_rank, solve};
pub use io::{format_matrix_csv, parse_matrix_text};
pub use numeric::{elimination_rank, numerical_rank, numerical_rank_default, singular_values};

use std::f64::consts::TAU;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, exact_power, rationalize, to_f64, Rational, RATIONALIZE_TOL};

/// Dense row-major rational matrix with no sign constraints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty {rows}x{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries supplied for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|row| row.iter().map(|&v| rational::int(v))).collect();
        Self::new(r, c, data)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Submatrix on the given row and column index lists (in that order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// `A·P` for the permutation matrix with `P[perm[j], j] = 1`: column `j` of
    /// the result is column `perm[j]` of `A`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.cols);
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, perm[j]).clone())
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rows);
        Self::from_fn(self.rows, self.cols, |i, j| self.get(perm[i], j).clone())
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| to_f64(self.get(i, j)))
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(rational::format_rational).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Nonnegative rational matrix: the object whose phaseless rank is studied.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NonnegMatrix(RatMatrix);

impl NonnegMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        Self::try_from(RatMatrix::new(rows, cols, data)?)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::try_from(RatMatrix::from_i64(rows)?)
    }

    /// Rationalizes floating entries at `tol` (continued fractions).
    pub fn from_f64(rows: usize, cols: usize, values: &[f64], tol: f64) -> Result<Self> {
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("entry {pos} is not finite")));
        }
        Self::new(rows, cols, values.iter().map(|&v| rationalize(v, tol)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Rational) -> Result<Self> {
        Self::try_from(RatMatrix::from_fn(rows, cols, f))
    }

    pub fn identity(n: usize) -> Self {
        Self(RatMatrix::identity(n))
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        Self(RatMatrix::from_fn(rows, cols, |_, _| Rational::one()))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(RatMatrix::from_fn(rows, cols, |_, _| Rational::zero()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::try_from(parse_matrix_text(text)?)
    }

    pub fn as_rat(&self) -> &RatMatrix {
        &self.0
    }

    pub fn into_rat(self) -> RatMatrix {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.rows
    }

    pub fn cols(&self) -> usize {
        self.0.cols
    }

    pub fn min_dim(&self) -> usize {
        self.rows().min(self.cols())
    }

    pub fn is_square(&self) -> bool {
        self.0.is_square()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        self.0.get(i, j)
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        self.0.row(i)
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        self.0.column(j)
    }

    pub fn entries(&self) -> &[Rational] {
        self.0.entries()
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self(self.0.select(rows, cols))
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let rows: Vec<usize> = (0..self.rows()).collect();
        self.select(&rows, cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let cols: Vec<usize> = (0..self.cols()).collect();
        self.select(rows, &cols)
    }

    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        Self(self.0.permute_columns(perm))
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        Self(self.0.permute_rows(perm))
    }

    /// `diag(row_scale) · A · diag(col_scale)`; scales must be nonnegative.
    pub fn scale(&self, row_scale: &[Rational], col_scale: &[Rational]) -> Result<Self> {
        if row_scale.len() != self.rows() || col_scale.len() != self.cols() {
            return Err(Error::Dimension("scaling vector length mismatch".into()));
        }
        Self::from_fn(self.rows(), self.cols(), |i, j| &row_scale[i] * self.get(i, j) * &col_scale[j])
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(Zero::is_zero)
    }

    pub fn zero_row(&self) -> Option<usize> {
        (0..self.rows()).find(|&i| self.row(i).iter().all(Zero::is_zero))
    }

    /// Entrywise square `A∘A`, exact.
    pub fn hadamard_square(&self) -> Self {
        Self(self.0.map(|v| v * v))
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        self.0.to_f64()
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        self.to_f64().map(|v| Complex64::new(v, 0.0))
    }
}

impl TryFrom<RatMatrix> for NonnegMatrix {
    type Error = Error;

    fn try_from(m: RatMatrix) -> Result<Self> {
        if let Some(pos) = m.data.iter().position(Signed::is_negative) {
            return Err(Error::NegativeEntry { row: pos / m.cols, col: pos % m.cols });
        }
        Ok(Self(m))
    }
}

impl fmt::Debug for NonnegMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NonnegMatrix{:?}", self.0)
    }
}

/// Entrywise power `A^{∘α}`. Exact whenever every entry has a rational `α`-th power,
/// otherwise that entry is computed in double precision and rationalized at `tol`.
pub fn hadamard_power(a: &NonnegMatrix, alpha: &Rational, tol: f64) -> Result<NonnegMatrix> {
    if !alpha.is_positive() {
        return Err(Error::Domain("Hadamard exponent must be positive".into()));
    }
    let alpha_f = to_f64(alpha);
    NonnegMatrix::from_fn(a.rows(), a.cols(), |i, j| {
        let v = a.get(i, j);
        exact_power(v, alpha).unwrap_or_else(|| rationalize(to_f64(v).powf(alpha_f), tol))
    })
}

/// Hadamard square root at the default rationalization precision.
pub fn hadamard_sqrt(a: &NonnegMatrix) -> NonnegMatrix {
    hadamard_power(a, &rational::ratio(1, 2), RATIONALIZE_TOL).expect("positive exponent")
}

/// `𝓜(A)`: moduli on the diagonal, negated moduli off it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ComparisonMatrix(RatMatrix);

impl ComparisonMatrix {
    /// Accepts any square matrix with nonnegative diagonal and nonpositive off-diagonal.
    pub fn from_z_matrix(m: RatMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("{}x{} matrix is not square", m.rows, m.cols)));
        }
        for i in 0..m.rows {
            for j in 0..m.cols {
                let v = m.get(i, j);
                let ok = if i == j { !v.is_negative() } else { !v.is_positive() };
                if !ok {
                    return Err(Error::Domain(format!("entry ({i}, {j}) has the wrong sign")));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn as_rat(&self) -> &RatMatrix {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        self.0.get(i, j)
    }

    /// Entrywise absolute value, which inverts [`comparison_matrix`].
    pub fn abs(&self) -> NonnegMatrix {
        NonnegMatrix(self.0.map(|v| v.abs()))
    }
}

impl fmt::Debug for ComparisonMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComparisonMatrix{:?}", self.0)
    }
}

pub fn comparison_matrix(a: &NonnegMatrix) -> Result<ComparisonMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("comparison matrix needs a square input, got {}x{}", a.rows(), a.cols())));
    }
    Ok(ComparisonMatrix(RatMatrix::from_fn(a.rows(), a.cols(), |i, j| {
        let v = a.get(i, j).clone();
        if i == j {
            v
        } else {
            -v
        }
    })))
}

/// Maps a phase to `[0, 2π)`.
pub fn normalize_phase(phase: f64) -> f64 {
    let p = phase.rem_euclid(TAU);
    if p >= TAU || p.is_nan() {
        0.0
    } else {
        p
    }
}

/// A member of the equimodular class `Ω(A)`: entry `(i, j)` is
/// `modulus(i, j) · exp(i · phase(i, j))`.
///
/// Phases are kept in `[0, 2π)` and zero-modulus entries always carry phase 0,
/// so two equal complex matrices have equal representations.
#[derive(Clone, PartialEq)]
pub struct PhasedMatrix {
    modulus: NonnegMatrix,
    phase: Vec<f64>,
}

impl PhasedMatrix {
    pub fn new(modulus: NonnegMatrix, phase: Vec<f64>) -> Result<Self> {
        if phase.len() != modulus.rows() * modulus.cols() {
            return Err(Error::Dimension(format!(
                "{} phases for a {}x{} modulus",
                phase.len(),
                modulus.rows(),
                modulus.cols()
            )));
        }
        if phase.iter().any(|p| !p.is_finite()) {
            return Err(Error::Domain("phase is not finite".into()));
        }
        let phase = phase
            .into_iter()
            .zip(modulus.entries())
            .map(|(p, m)| if m.is_zero() { 0.0 } else { normalize_phase(p) })
            .collect();
        Ok(Self { modulus, phase })
    }

    pub fn zero_phase(modulus: NonnegMatrix) -> Self {
        let n = modulus.rows() * modulus.cols();
        Self { modulus, phase: vec![0.0; n] }
    }

    /// Splits a complex matrix into rationalized moduli and phases.
    pub fn from_complex(m: &DMatrix<Complex64>, tol: f64) -> Result<Self> {
        let (rows, cols) = m.shape();
        let mut moduli = Vec::with_capacity(rows * cols);
        let mut phases = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let z = m[(i, j)];
                moduli.push(z.norm());
                phases.push(z.arg());
            }
        }
        Self::new(NonnegMatrix::from_f64(rows, cols, &moduli, tol)?, phases)
    }

    pub fn rows(&self) -> usize {
        self.modulus.rows()
    }

    pub fn cols(&self) -> usize {
        self.modulus.cols()
    }

    pub fn modulus(&self) -> &NonnegMatrix {
        &self.modulus
    }

    pub fn phases(&self) -> &[f64] {
        &self.phase
    }

    pub fn phase(&self, i: usize, j: usize) -> f64 {
        self.phase[i * self.cols() + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        Complex64::from_polar(to_f64(self.modulus.get(i, j)), self.phase(i, j))
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows(), self.cols(), |i, j| self.entry(i, j))
    }

    pub fn transpose(&self) -> Self {
        let (r, c) = (self.rows(), self.cols());
        let phase = (0..c * r).map(|k| self.phase[(k % r) * c + k / r]).collect();
        Self { modulus: self.modulus.transpose(), phase }
    }

    /// Whether the moduli equal `a` exactly.
    pub fn is_equimodular_with(&self, a: &NonnegMatrix) -> bool {
        &self.modulus == a
    }

    /// Largest entrywise `|modulus − a|`, in double precision.
    pub fn modulus_deviation(&self, a: &NonnegMatrix) -> f64 {
        if a.rows() != self.rows() || a.cols() != self.cols() {
            return f64::INFINITY;
        }
        self.modulus.entries().iter().zip(a.entries()).map(|(x, y)| to_f64(&(x - y)).abs()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for PhasedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhasedMatrix").field("modulus", &self.modulus).field("phase", &self.phase).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use std::f64::consts::PI;

    fn d4() -> NonnegMatrix {
        NonnegMatrix::from_i64(&[&[0, 1, 1, 1], &[1, 0, 1, 1], &[1, 1, 0, 1], &[1, 1, 1, 0]]).unwrap()
    }

    #[test]
    fn rejects_negative_and_empty() {
        assert_eq!(NonnegMatrix::from_i64(&[&[1, -1]]).unwrap_err(), Error::NegativeEntry { row: 0, col: 1 });
        assert!(matches!(NonnegMatrix::new(0, 2, vec![]), Err(Error::Dimension(_))));
        assert!(matches!(NonnegMatrix::new(2, 2, vec![int(1)]), Err(Error::Dimension(_))));
    }

    #[test]
    fn comparison_matrix_examples() {
        let i3 = NonnegMatrix::identity(3);
        assert_eq!(comparison_matrix(&i3).unwrap().as_rat(), i3.as_rat());

        let j2 = NonnegMatrix::ones(2, 2);
        let expected = RatMatrix::from_i64(&[&[1, -1], &[-1, 1]]).unwrap();
        assert_eq!(comparison_matrix(&j2).unwrap().as_rat(), &expected);

        let m = comparison_matrix(&d4()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 0 } else { -1 };
                assert_eq!(m.get(i, j), &int(want));
            }
        }
        assert_eq!(m.abs(), d4());
    }

    #[test]
    fn comparison_matrix_needs_square() {
        let a = NonnegMatrix::ones(2, 3);
        assert!(matches!(comparison_matrix(&a), Err(Error::Dimension(_))));
    }

    #[test]
    fn hadamard_power_examples() {
        let a = NonnegMatrix::from_fn(3, 3, |i, j| if i == j { int(3) } else { int(1) }).unwrap();
        assert_eq!(hadamard_power(&a, &int(1), 1e-12).unwrap(), a);

        let sq = hadamard_power(&a, &int(2), 1e-12).unwrap();
        assert_eq!(sq.get(0, 0), &int(9));
        assert_eq!(sq.get(0, 1), &int(1));
        assert_eq!(sq, a.hadamard_square());

        let slack = NonnegMatrix::from_i64(&[&[0, 2], &[2, 0]]).unwrap();
        let root = hadamard_sqrt(&slack);
        assert_eq!(root.get(0, 0), &int(0));
        assert!((to_f64(root.get(0, 1)) - 2f64.sqrt()).abs() < 1e-12);

        let quarter = NonnegMatrix::new(1, 1, vec![ratio(9, 4)]).unwrap();
        assert_eq!(hadamard_sqrt(&quarter).get(0, 0), &ratio(3, 2));
        assert!(hadamard_power(&a, &int(0), 1e-12).is_err());
    }

    #[test]
    fn phases_are_canonical() {
        let m = PhasedMatrix::new(NonnegMatrix::from_i64(&[&[0, 1]]).unwrap(), vec![1.0, -PI / 2.0]).unwrap();
        assert_eq!(m.phase(0, 0), 0.0);
        assert!((m.phase(0, 1) - 1.5 * PI).abs() < 1e-15);
        assert!(normalize_phase(TAU) < TAU);
    }

    #[test]
    fn phased_transpose_moves_phases() {
        let modulus = NonnegMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6]]).unwrap();
        let m = PhasedMatrix::new(modulus, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
        let t = m.transpose();
        assert_eq!(t.rows(), 3);
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(t.phase(j, i), m.phase(i, j));
                assert_eq!(t.modulus().get(j, i), m.modulus().get(i, j));
            }
        }
    }

    #[test]
    fn scaling_and_permutation() {
        let a = NonnegMatrix::from_i64(&[&[1, 2], &[3, 4]]).unwrap();
        let p = a.permute_columns(&[1, 0]);
        assert_eq!(p.get(0, 0), &int(2));
        let s = a.scale(&[int(2), int(1)], &[int(1), ratio(1, 2)]).unwrap();
        assert_eq!(s.get(0, 1), &int(2));
        assert_eq!(s.get(1, 1), &int(2));
    }
}
