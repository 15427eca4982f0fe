//! Matrix templates in two parameters `s` and `t`.
//!
//! One row per line (or `;`-separated), entries separated by commas. Entries are
//! arithmetic expressions over rationals, `s`, `t` (aliases `x`, `y`), `+ - * /`,
//! parentheses and `sqrt(…)`. Values stay exact unless a square root is
//! irrational.

use crate::error::{Error, Result};
use crate::rational::{exact_power, parse_rational, ratio, to_f64, Rational};
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Const(Rational),
    S,
    T,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Sqrt(Box<Expr>),
}

/// An evaluated entry: exact when possible, always with a float value.
#[derive(Debug, Clone, PartialEq)]
pub struct Value {
    pub exact: Option<Rational>,
    pub approx: f64,
}

impl Value {
    fn exact(r: Rational) -> Self {
        Self { approx: to_f64(&r), exact: Some(r) }
    }

    fn float(x: f64) -> Self {
        Self { exact: None, approx: x }
    }
}

impl Expr {
    fn eval(&self, s: &Rational, t: &Rational) -> Result<Value> {
        let bin = |a: &Expr, b: &Expr, fe: fn(&Rational, &Rational) -> Option<Rational>, ff: fn(f64, f64) -> f64| {
            let (x, y) = (a.eval(s, t)?, b.eval(s, t)?);
            Ok(match (&x.exact, &y.exact) {
                (Some(p), Some(q)) => match fe(p, q) {
                    Some(r) => Value::exact(r),
                    None => return Err(Error::Domain("division by zero in template".into())),
                },
                _ => Value::float(ff(x.approx, y.approx)),
            })
        };
        match self {
            Expr::Const(c) => Ok(Value::exact(c.clone())),
            Expr::S => Ok(Value::exact(s.clone())),
            Expr::T => Ok(Value::exact(t.clone())),
            Expr::Neg(e) => {
                let v = e.eval(s, t)?;
                Ok(Value { exact: v.exact.map(|r| -r), approx: -v.approx })
            }
            Expr::Add(a, b) => bin(a, b, |p, q| Some(p + q), |x, y| x + y),
            Expr::Sub(a, b) => bin(a, b, |p, q| Some(p - q), |x, y| x - y),
            Expr::Mul(a, b) => bin(a, b, |p, q| Some(p * q), |x, y| x * y),
            Expr::Div(a, b) => bin(a, b, |p, q| (!q.is_zero()).then(|| p / q), |x, y| x / y),
            Expr::Sqrt(e) => {
                let v = e.eval(s, t)?;
                if v.approx < 0.0 || v.exact.as_ref().is_some_and(Signed::is_negative) {
                    return Err(Error::Domain("square root of a negative value in template".into()));
                }
                Ok(match v.exact.as_ref().and_then(|r| exact_power(r, &ratio(1, 2))) {
                    Some(r) => Value::exact(r),
                    None => Value::float(v.approx.sqrt()),
                })
            }
        }
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == '+' { Expr::Add(lhs.into(), rhs.into()) } else { Expr::Sub(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = if c == '*' { Expr::Mul(lhs.into(), rhs.into()) } else { Expr::Div(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(Expr::Neg(self.factor()?.into()))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_ascii_digit() || self.chars[self.pos] == '.')
                {
                    self.pos += 1;
                }
                let text: String = self.chars[start..self.pos].iter().collect();
                parse_rational(&text).map(Expr::Const).ok_or_else(|| self.err(format!("bad number {text:?}")))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match name.as_str() {
                    "s" | "x" => Ok(Expr::S),
                    "t" | "y" => Ok(Expr::T),
                    "sqrt" => {
                        self.expect('(')?;
                        let e = self.expr()?;
                        self.expect(')')?;
                        Ok(Expr::Sqrt(e.into()))
                    }
                    _ => Err(self.err(format!("unknown name {name:?}"))),
                }
            }
            other => Err(self.err(format!("unexpected {other:?}"))),
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {c:?}")))
        }
    }
}

fn parse_expr(text: &str, line: usize) -> Result<Expr> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, line, _src: text };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err(format!("trailing input in {text:?}")));
    }
    Ok(e)
}

/// A parsed matrix template.
#[derive(Debug, Clone, PartialEq)]
pub struct Template {
    rows: usize,
    cols: usize,
    entries: Vec<Expr>,
    source: String,
}

impl Template {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let (mut rows, mut cols) = (0, 0);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            for row in line.split(';').map(str::trim).filter(|r| !r.is_empty()) {
                let parsed = row.split(',').map(|e| parse_expr(e, lineno + 1)).collect::<Result<Vec<_>>>()?;
                if rows > 0 && parsed.len() != cols {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        message: format!("expected {cols} entries, found {}", parsed.len()),
                    });
                }
                cols = parsed.len();
                rows += 1;
                entries.extend(parsed);
            }
        }
        if rows == 0 {
            return Err(Error::Parse { line: 0, message: "empty template".into() });
        }
        Ok(Self { rows, cols, entries, source: text.trim().to_string() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Evaluates every entry at `(s, t)`, row-major.
    pub fn eval(&self, s: &Rational, t: &Rational) -> Result<Vec<Value>> {
        self.entries.iter().map(|e| e.eval(s, t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn exact_evaluation() {
        let t = Template::parse("1, x, y\ny, 1, x; x, y, 1").unwrap();
        assert_eq!((t.rows(), t.cols()), (3, 3));
        let v = t.eval(&ratio(1, 2), &int(2)).unwrap();
        assert_eq!(v[1].exact, Some(ratio(1, 2)));
        assert_eq!(v[3].exact, Some(int(2)));
    }

    #[test]
    fn arithmetic_and_roots() {
        let t = Template::parse("x - y + 1, -(s*2)/4, sqrt(4*t), sqrt(2)").unwrap();
        let v = t.eval(&int(3), &int(1)).unwrap();
        assert_eq!(v[0].exact, Some(int(3)));
        assert_eq!(v[1].exact, Some(ratio(-3, 2)));
        assert_eq!(v[2].exact, Some(int(2)));
        assert_eq!(v[3].exact, None);
        assert!((v[3].approx - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(Template::parse("1, z").is_err());
        assert!(Template::parse("1, 2\n3").is_err());
        assert!(Template::parse("(1").is_err());
        let t = Template::parse("1/s").unwrap();
        assert!(t.eval(&int(0), &int(0)).is_err());
        assert!(Template::parse("sqrt(s)").unwrap().eval(&int(-1), &int(0)).is_err());
    }
}
