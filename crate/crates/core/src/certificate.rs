//! Plain-text certificates: one `key = value` pair per line, lists as
//! comma-separated values, `#` comments. Phases use Rust's shortest
//! round-trip float formatting, so writing and re-reading is lossless.

use crate::error::{Error, Result};
use crate::lopsided::WeightVector;
use crate::lp::FarkasCertificate;
use crate::matrix::{NonnegMatrix, PhasedMatrix, RatMatrix};
use crate::rank::{Bracket, RankDecision};
use crate::rational::{format_rational, parse_rational, Rational};

/// Ordered `key = value` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KeyValues(Vec<(String, String)>);

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: lineno + 1, message: "expected key = value".into() })?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(Self(pairs))
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.0.push((key.into(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn require(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| Error::Parse { line: 0, message: format!("missing key {key:?}") })
    }

    pub fn render(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(",")
}

fn bad(message: String) -> Error {
    Error::Parse { line: 0, message }
}

fn split_list<T>(value: &str, f: impl Fn(&str) -> Option<T>) -> Result<Vec<T>> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|s| f(s.trim()).ok_or_else(|| bad(format!("bad list entry {s:?}")))).collect()
}

fn rationals(value: &str) -> Result<Vec<Rational>> {
    split_list(value, parse_rational)
}

fn indices(value: &str) -> Result<Vec<usize>> {
    split_list(value, |s| s.parse().ok())
}

fn flag(value: &str) -> Result<bool> {
    value.parse().map_err(|_| bad(format!("expected true or false, got {value:?}")))
}

fn push_phased(kv: &mut KeyValues, prefix: &str, w: &PhasedMatrix) {
    kv.push(format!("{prefix}rows"), w.rows().to_string());
    kv.push(format!("{prefix}cols"), w.cols().to_string());
    for i in 0..w.rows() {
        kv.push(format!("{prefix}modulus.{i}"), join(w.modulus().row(i), format_rational));
    }
    for i in 0..w.rows() {
        let row: Vec<f64> = (0..w.cols()).map(|j| w.phase(i, j)).collect();
        kv.push(format!("{prefix}phase.{i}"), join(&row, |p| format!("{p:?}")));
    }
}

fn read_phased(kv: &KeyValues, prefix: &str) -> Result<PhasedMatrix> {
    let rows: usize = kv.require(&format!("{prefix}rows"))?.parse().map_err(|_| bad("bad row count".into()))?;
    let cols: usize = kv.require(&format!("{prefix}cols"))?.parse().map_err(|_| bad("bad column count".into()))?;
    let mut moduli = Vec::with_capacity(rows * cols);
    let mut phases = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let m = rationals(kv.require(&format!("{prefix}modulus.{i}"))?)?;
        let p = split_list(kv.require(&format!("{prefix}phase.{i}"))?, |s| s.parse::<f64>().ok())?;
        if m.len() != cols || p.len() != cols {
            return Err(bad(format!("row {i} has the wrong length")));
        }
        moduli.extend(m);
        phases.extend(p);
    }
    let modulus = NonnegMatrix::try_from(RatMatrix::new(rows, cols, moduli)?)?;
    PhasedMatrix::new(modulus, phases)
}

pub fn format_phased_matrix(w: &PhasedMatrix) -> String {
    let mut kv = KeyValues::default();
    push_phased(&mut kv, "", w);
    kv.render()
}

pub fn parse_phased_matrix(text: &str) -> Result<PhasedMatrix> {
    read_phased(&KeyValues::parse(text)?, "")
}

pub fn format_decision(d: &RankDecision) -> String {
    let mut kv = KeyValues::default();
    match d {
        RankDecision::Nonmaximal { lambda, witness, transposed } => {
            kv.push("verdict", "nonmaximal");
            kv.push("transposed", transposed.to_string());
            kv.push("lambda", join(lambda.as_slice(), format_rational));
            push_phased(&mut kv, "witness.", witness);
        }
        RankDecision::Maximal { columns, permutation, scaling, farkas, transposed } => {
            kv.push("verdict", "maximal");
            kv.push("transposed", transposed.to_string());
            kv.push("columns", join(columns, usize::to_string));
            kv.push("permutation", join(permutation, usize::to_string));
            kv.push("scaling", join(scaling, format_rational));
            if let Some(f) = farkas {
                kv.push("farkas.ineq", join(&f.ineq, format_rational));
                kv.push("farkas.eq", join(&f.eq, format_rational));
            }
        }
    }
    kv.render()
}

pub fn parse_decision(text: &str) -> Result<RankDecision> {
    let kv = KeyValues::parse(text)?;
    let transposed = flag(kv.require("transposed")?)?;
    match kv.require("verdict")? {
        "nonmaximal" => Ok(RankDecision::Nonmaximal {
            lambda: WeightVector::new(rationals(kv.require("lambda")?)?)?,
            witness: read_phased(&kv, "witness.")?,
            transposed,
        }),
        "maximal" => {
            let farkas = match (kv.get("farkas.ineq"), kv.get("farkas.eq")) {
                (Some(i), Some(e)) => Some(FarkasCertificate { ineq: rationals(i)?, eq: rationals(e)? }),
                _ => None,
            };
            Ok(RankDecision::Maximal {
                columns: indices(kv.require("columns")?)?,
                permutation: indices(kv.require("permutation")?)?,
                scaling: rationals(kv.require("scaling")?)?,
                farkas,
                transposed,
            })
        }
        other => Err(bad(format!("unknown verdict {other:?}"))),
    }
}

pub fn format_bracket(b: &Bracket) -> String {
    let mut kv = KeyValues::default();
    kv.push("lower", b.lower.to_string());
    kv.push("upper", b.upper.to_string());
    kv.push("lower_source", format!("{:?}", b.lower_source));
    kv.push("upper_source", format!("{:?}", b.upper_source));
    kv.push("exact", b.is_exact().to_string());
    if let Some(w) = &b.upper_witness {
        push_phased(&mut kv, "witness.", w);
    }
    kv.render()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::decide_nonmaximal;

    #[test]
    fn decisions_round_trip() {
        let d4 = NonnegMatrix::from_i64(&[&[0, 1, 1, 1], &[1, 0, 1, 1], &[1, 1, 0, 1], &[1, 1, 1, 0]]).unwrap();
        let wide = NonnegMatrix::from_i64(&[&[9, 1, 1, 1, 1], &[1, 9, 1, 1, 1], &[1, 1, 9, 1, 1]]).unwrap();
        for a in [d4, NonnegMatrix::identity(3), wide.clone(), wide.transpose()] {
            let d = decide_nonmaximal(&a).unwrap();
            let text = format_decision(&d);
            let back = parse_decision(&text).unwrap();
            assert_eq!(back, d, "{text}");
            back.verify(&a).unwrap();
        }
    }

    #[test]
    fn phased_round_trip() {
        let w =
            PhasedMatrix::new(NonnegMatrix::from_i64(&[&[1, 2], &[0, 3]]).unwrap(), vec![0.1, 2.0, 0.0, 6.0]).unwrap();
        assert_eq!(parse_phased_matrix(&format_phased_matrix(&w)).unwrap(), w);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_decision("verdict = maybe\ntransposed = false").is_err());
        assert!(parse_decision("nonsense").is_err());
        assert!(parse_phased_matrix("rows = 1\ncols = 2\nmodulus.0 = 1\nphase.0 = 0,0").is_err());
    }
}
