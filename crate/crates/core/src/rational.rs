//! Arbitrary-precision rational helpers: literal parsing, float conversion,
//! continued-fraction rationalization and exact roots.

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Default precision used when an irrational quantity has to be carried as a rational.
pub const RATIONALIZE_TOL: f64 = 1e-12;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Huge numerator or denominator: shift both down to the f64 range first.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = (nb.max(db) - 1000).max(0) as usize;
    let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
    if d == 0.0 {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    } else {
        n / d
    }
}

/// Parses `p/q`, integer, or decimal literals (`1.25`, `-3`, `2.5e-3`) exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{whole}{frac}").parse().ok()?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Best rational approximation of `x` by continued fractions, stopping at the first
/// convergent within `tol` of `x`.
pub fn rationalize(x: f64, tol: f64) -> Rational {
    assert!(x.is_finite(), "cannot rationalize a non-finite value");
    if x == x.trunc() && x.abs() < 9.0e15 {
        return int(x as i64);
    }
    let negative = x < 0.0;
    let target = x.abs();
    let exact = Rational::from_float(target).expect("finite");
    let tol_r = Rational::from_float(tol.max(0.0)).unwrap_or_else(Rational::zero);

    // Convergents h/k of the exact binary value of x.
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut rem = exact.clone();
    let best = loop {
        let a = rem.floor().to_integer();
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let approx = Rational::new(h.clone(), k.clone());
        let frac = &rem - Rational::from_integer(a);
        if (&approx - &exact).abs() <= tol_r || frac.is_zero() {
            break approx;
        }
        rem = frac.recip();
    };
    if negative {
        -best
    } else {
        best
    }
}

/// Exact `q`-th root of a nonnegative integer, if it is a perfect power.
fn exact_int_root(n: &BigInt, q: u32) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.nth_root(q);
    (num_traits::pow(r.clone(), q as usize) == *n).then_some(r)
}

/// `base^exp` when the result is rational (base ≥ 0, exp > 0), otherwise `None`.
pub fn exact_power(base: &Rational, exp: &Rational) -> Option<Rational> {
    if base.is_negative() || !exp.is_positive() {
        return None;
    }
    if base.is_zero() {
        return Some(Rational::zero());
    }
    let p = exp.numer().to_u32()?;
    let q = exp.denom().to_u32()?;
    let num = exact_int_root(base.numer(), q)?;
    let den = exact_int_root(base.denom(), q)?;
    Some(num_traits::pow(Rational::new(num, den), p as usize))
}

/// Smallest integer `s` with `s² ≥ r`.
pub fn ceil_sqrt(r: u64) -> u64 {
    let s = r.sqrt();
    if s * s == r {
        s
    } else {
        s + 1
    }
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_literals() {
        assert_eq!(parse_rational("3/6"), Some(ratio(1, 2)));
        assert_eq!(parse_rational(" 1.25 "), Some(ratio(5, 4)));
        assert_eq!(parse_rational("-2"), Some(int(-2)));
        assert_eq!(parse_rational("2.5e-3"), Some(ratio(1, 400)));
        assert_eq!(parse_rational(".5"), Some(ratio(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn rationalize_finds_short_convergents() {
        assert_eq!(rationalize(0.5, 1e-12), ratio(1, 2));
        assert_eq!(rationalize(-0.75, 1e-12), ratio(-3, 4));
        let r = rationalize(std::f64::consts::SQRT_2, 1e-12);
        assert!((to_f64(&r) - std::f64::consts::SQRT_2).abs() <= 1e-12);
        assert!(r.denom() < &BigInt::from(10_000_000));
    }

    #[test]
    fn exact_powers() {
        assert_eq!(exact_power(&ratio(9, 4), &ratio(1, 2)), Some(ratio(3, 2)));
        assert_eq!(exact_power(&int(2), &ratio(1, 2)), None);
        assert_eq!(exact_power(&int(8), &ratio(2, 3)), Some(int(4)));
        assert_eq!(exact_power(&int(0), &ratio(1, 2)), Some(int(0)));
    }

    #[test]
    fn ceil_sqrt_values() {
        assert_eq!(ceil_sqrt(0), 0);
        assert_eq!(ceil_sqrt(1), 1);
        assert_eq!(ceil_sqrt(4), 2);
        assert_eq!(ceil_sqrt(5), 3);
        assert_eq!(ceil_sqrt(9), 3);
    }
}
