//! Lopsidedness, the `Lop(x)` weight polytope, and polygon closure.
//!
//! A nonnegative list is lopsided when one entry exceeds the sum of the others.
//! Nonlopsided lists are exactly the side lengths of closed planar polygons, so
//! they admit phases making `Σ v_k e^{iφ_k}` vanish; [`close_polygon`] builds them.

use std::f64::consts::PI;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::normalize_phase;
use crate::rational::Rational;

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Dimension("empty weight vector".into()));
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::Domain("weights must be nonnegative".into()));
        }
        if weights.iter().sum::<Rational>() != Rational::one() {
            return Err(Error::Domain("weights must sum to one".into()));
        }
        Ok(Self(weights))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![Rational::new(1.into(), (n as i64).into()); n])
    }

    /// Indicator of coordinate `i` in dimension `n`.
    pub fn indicator(n: usize, i: usize) -> Self {
        Self((0..n).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect())
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Phases closing a polygon, one per side.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseAssignment(pub Vec<f64>);

impl PhaseAssignment {
    /// `|Σ v_k e^{iφ_k}|` for the side lengths `v`.
    pub fn residual(&self, v: &[f64]) -> f64 {
        let (re, im) =
            v.iter().zip(&self.0).fold((0.0, 0.0), |(re, im), (len, phi)| (re + len * phi.cos(), im + len * phi.sin()));
        re.hypot(im)
    }
}

fn argmax<T: PartialOrd>(v: &[T]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate().skip(1) {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

/// True iff `max(v) > sum(v) − max(v)`, exactly.
pub fn is_lopsided(v: &[Rational]) -> bool {
    if v.is_empty() {
        return false;
    }
    let max = &v[argmax(v)];
    let rest: Rational = v.iter().sum::<Rational>() - max;
    max > &rest
}

/// Whether `(x_1 y_1, …, x_n y_n)` satisfies every generalized triangle inequality
/// `x_i y_i ≤ Σ_{k≠i} x_k y_k`, i.e. `y ∈ Lop(x)`.
pub fn lop_membership(x: &[Rational], y: &WeightVector) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!("value list has length {}, weights have length {}", x.len(), y.len())));
    }
    let products: Vec<Rational> = x.iter().zip(y.as_slice()).map(|(a, b)| a * b).collect();
    Ok(!is_lopsided(&products))
}

/// Phases `φ` with `|Σ v_k e^{iφ_k}| ≈ 0` for a nonlopsided list `v`.
///
/// The largest side `a` points along 0. The remaining sides are split greedily
/// (descending, each into the lighter group) into two groups of total length `b`
/// and `c`. Nonlopsidedness gives `a ≤ b + c` and the greedy split gives
/// `|b − c| ≤ a`, so `a, b, c` form a triangle; every side in a group shares that
/// triangle edge's direction. Zero sides get phase 0.
pub fn close_polygon(v: &[f64]) -> Result<PhaseAssignment> {
    if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::Domain("side lengths must be finite and nonnegative".into()));
    }
    let n = v.len();
    if n == 0 {
        return Ok(PhaseAssignment(Vec::new()));
    }
    let top = argmax(v);
    let a = v[top];
    let total: f64 = v.iter().sum();
    if a > total - a {
        return Err(Error::Lopsided { index: top, column: None });
    }
    if a == 0.0 {
        return Ok(PhaseAssignment(vec![0.0; n]));
    }

    let mut rest: Vec<usize> = (0..n).filter(|&k| k != top).collect();
    rest.sort_by(|&i, &j| v[j].total_cmp(&v[i]).then(i.cmp(&j)));
    let (mut b, mut c) = (0.0, 0.0);
    let mut in_b = vec![false; n];
    for &k in &rest {
        if b <= c {
            b += v[k];
            in_b[k] = true;
        } else {
            c += v[k];
        }
    }

    // Interior angles of the triangle: gamma between sides a and b, beta between a and c.
    let gamma = triangle_angle(a, b, c);
    let beta = triangle_angle(a, c, b);
    let dir_b = PI - gamma;
    let dir_c = PI + beta;

    let phases = (0..n)
        .map(|k| {
            if v[k] == 0.0 || k == top {
                0.0
            } else if in_b[k] {
                normalize_phase(dir_b)
            } else {
                normalize_phase(dir_c)
            }
        })
        .collect();
    Ok(PhaseAssignment(phases))
}

/// Angle between sides `x` and `y` of the triangle whose third side is
/// `opposite`, by Kahan's formula, which stays accurate for needle-like
/// triangles. Inputs that miss the triangle inequality by rounding give 0 or π.
fn triangle_angle(x: f64, y: f64, opposite: f64) -> f64 {
    let (a, b, c) = if x >= y { (x, y, opposite) } else { (y, x, opposite) };
    if b == 0.0 {
        return 0.0;
    }
    let mu = if b >= c { c - (a - b) } else { b - (a - c) };
    let num = ((a - b) + c) * mu;
    let den = (a + (b + c)) * ((a - c) + b);
    if num <= 0.0 {
        0.0
    } else if den <= 0.0 {
        PI
    } else {
        2.0 * (num / den).sqrt().atan()
    }
}
