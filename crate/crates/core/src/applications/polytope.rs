//! Slack matrices of polytopes and complex semidefinite lifts.

use std::f64::consts::TAU;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{hadamard_sqrt, numerical_rank, NonnegMatrix, PhasedMatrix};
use crate::rank::{upper_bound_patching, WITNESS_RANK_TOL};
use crate::rational::{parse_rational, rationalize, Rational, RATIONALIZE_TOL};

/// A polytope given by explicit vertices and facet inequalities `⟨a, x⟩ ≤ b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeVH {
    vertices: Vec<Vec<Rational>>,
    facets: Vec<(Vec<Rational>, Rational)>,
}

impl PolytopeVH {
    /// Checks dimensions and that every vertex satisfies every facet.
    pub fn new(vertices: Vec<Vec<Rational>>, facets: Vec<(Vec<Rational>, Rational)>) -> Result<Self> {
        if vertices.is_empty() || facets.is_empty() {
            return Err(Error::InvalidPolytope("need at least one vertex and one facet".into()));
        }
        let d = vertices[0].len();
        if d == 0 || vertices.iter().any(|v| v.len() != d) || facets.iter().any(|(a, _)| a.len() != d) {
            return Err(Error::InvalidPolytope("inconsistent dimensions".into()));
        }
        let p = Self { vertices, facets };
        for i in 0..p.vertices.len() {
            for j in 0..p.facets.len() {
                if p.slack(i, j).is_negative() {
                    return Err(Error::InvalidPolytope(format!("vertex {i} violates facet {j}")));
                }
            }
        }
        Ok(p)
    }

    /// Parses `V:` followed by vertex rows and `H:` followed by rows `a_1,…,a_d,b`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut section = None;
        let mut vertices = Vec::new();
        let mut facets = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match line.to_ascii_uppercase().as_str() {
                "V:" => {
                    section = Some('V');
                    continue;
                }
                "H:" => {
                    section = Some('H');
                    continue;
                }
                _ => {}
            }
            let values = line
                .split(',')
                .map(|f| {
                    parse_rational(f)
                        .ok_or_else(|| Error::Parse { line: lineno + 1, message: format!("bad entry {:?}", f.trim()) })
                })
                .collect::<Result<Vec<_>>>()?;
            match section {
                Some('V') => vertices.push(values),
                Some('H') => {
                    let mut a = values;
                    let b = a.pop().ok_or_else(|| Error::Parse { line: lineno + 1, message: "empty facet".into() })?;
                    facets.push((a, b));
                }
                _ => return Err(Error::Parse { line: lineno + 1, message: "data before a V: or H: header".into() }),
            }
        }
        Self::new(vertices, facets)
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[(Vec<Rational>, Rational)] {
        &self.facets
    }

    fn slack(&self, i: usize, j: usize) -> Rational {
        let (a, b) = &self.facets[j];
        let dot: Rational = a.iter().zip(&self.vertices[i]).map(|(x, y)| x * y).sum();
        b - dot
    }
}

/// `S_ij = b_j − ⟨a_j, p_i⟩`, vertices by facets.
pub fn slack_matrix(p: &PolytopeVH) -> Result<NonnegMatrix> {
    NonnegMatrix::from_fn(p.vertices.len(), p.facets.len(), |i, j| p.slack(i, j))
        .map_err(|e| Error::InvalidPolytope(e.to_string()))
}

/// Regular `n`-gon with vertices rationalized on the unit circle and one facet
/// through each pair of consecutive vertices, computed exactly from the
/// rationalized vertices so those slacks vanish exactly.
pub fn ngon(n: usize) -> Result<PolytopeVH> {
    if n < 3 {
        return Err(Error::Domain(format!("an n-gon needs n ≥ 3, got {n}")));
    }
    let vertices: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let t = TAU * i as f64 / n as f64;
            vec![rationalize(t.cos(), RATIONALIZE_TOL), rationalize(t.sin(), RATIONALIZE_TOL)]
        })
        .collect();
    let facets = (0..n)
        .map(|i| {
            let (p, q) = (&vertices[i], &vertices[(i + 1) % n]);
            // Outward normal of a counterclockwise edge.
            let a = vec![&q[1] - &p[1], &p[0] - &q[0]];
            let b = &a[0] * &p[0] + &a[1] * &p[1];
            (a, b)
        })
        .collect();
    PolytopeVH::new(vertices, facets)
}

/// `m − ⌊(m−1)/(d+1)⌋` with `m = min(#vertices, #facets)`.
pub fn cpsd_upper_bound(p: &PolytopeVH) -> usize {
    let m = p.vertices.len().min(p.facets.len());
    m - (m - 1) / (p.dim() + 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftWitness {
    /// Equimodular with the (rationalized) Hadamard square root of the slack matrix.
    pub witness: PhasedMatrix,
    pub bound: usize,
    /// Set when some block was nonmaximal only up to rounding.
    pub approximate: bool,
}

/// Low-rank matrix in `Ω(√S)`: the row-block patching with blocks of `d+2`
/// rows. Every `(d+2)`-row block of `S` is singular, so its square root has
/// nonmaximal phaseless rank.
pub fn cpsd_lift_witness(p: &PolytopeVH) -> Result<LiftWitness> {
    let root = hadamard_sqrt(&slack_matrix(p)?);
    let k = p.dim() + 2;
    let bound = cpsd_upper_bound(p);
    if k > root.min_dim() {
        return Ok(LiftWitness { witness: PhasedMatrix::zero_phase(root), bound, approximate: false });
    }
    // Patching needs a nonzero shared first row; move one to the front.
    let first = (0..root.rows())
        .find(|&i| root.row(i).iter().any(|v| !v.is_zero()))
        .ok_or_else(|| Error::InvalidPolytope("zero slack matrix".into()))?;
    let order: Vec<usize> = std::iter::once(first).chain((0..root.rows()).filter(|&i| i != first)).collect();
    let patched = upper_bound_patching(&root.permute_rows(&order), k)?;
    let mut inverse = vec![0; order.len()];
    for (pos, &i) in order.iter().enumerate() {
        inverse[i] = pos;
    }
    let w = patched.witness;
    let phases: Vec<f64> = (0..root.rows())
        .flat_map(|i| {
            let w = &w;
            let r = inverse[i];
            (0..root.cols()).map(move |j| w.phase(r, j))
        })
        .collect();
    let witness = PhasedMatrix::new(root, phases)?;
    debug_assert!(patched.approximate || numerical_rank(&witness, WITNESS_RANK_TOL) <= patched.bound);
    Ok(LiftWitness { witness, bound: patched.bound, approximate: patched.approximate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rational_rank;
    use crate::rational::int;

    fn square() -> PolytopeVH {
        PolytopeVH::parse("V:\n1,1\n-1,1\n-1,-1\n1,-1\nH:\n1,0,1\n0,1,1\n-1,0,1\n0,-1,1\n").unwrap()
    }

    pub(crate) fn cube() -> PolytopeVH {
        let mut text = String::from("V:\n");
        for mask in 0..8 {
            let c: Vec<&str> = (0..3).map(|b| if mask >> b & 1 == 1 { "1" } else { "-1" }).collect();
            text += &format!("{}\n", c.join(","));
        }
        text += "H:\n1,0,0,1\n-1,0,0,1\n0,1,0,1\n0,-1,0,1\n0,0,1,1\n0,0,-1,1\n";
        PolytopeVH::parse(&text).unwrap()
    }

    #[test]
    fn square_slack() {
        let s = slack_matrix(&square()).unwrap();
        assert_eq!((s.rows(), s.cols()), (4, 4));
        for i in 0..4 {
            let row = s.row(i);
            assert!(row.iter().all(|v| *v == int(0) || *v == int(2)));
            assert_eq!(row.iter().filter(|v| v.is_zero()).count(), 2);
        }
        assert_eq!(rational_rank(s.as_rat()), 3);
    }

    #[test]
    fn triangle_slack_has_zero_diagonal() {
        // Facet j is opposite vertex j.
        let t = PolytopeVH::parse("V:\n0,0\n1,0\n0,1\nH:\n1,1,1\n-1,0,0\n0,-1,0\n").unwrap();
        let s = slack_matrix(&t).unwrap();
        let perm = [1, 2, 0];
        let s = s.permute_columns(&perm);
        assert!((0..3).all(|i| s.get(i, i).is_zero()));
        assert_eq!(rational_rank(s.as_rat()), 3);
    }

    #[test]
    fn invalid_polytopes() {
        assert!(matches!(PolytopeVH::parse("V:\n2,0\nH:\n1,0,1\n"), Err(Error::InvalidPolytope(_))));
        assert!(matches!(PolytopeVH::parse("1,0\n"), Err(Error::Parse { .. })));
        assert!(matches!(PolytopeVH::parse("V:\n1,0\nH:\n1,1\n0,1,1\n"), Err(Error::InvalidPolytope(_))));
    }

    #[test]
    fn ngon_slack_ranks() {
        for n in [3, 4, 6, 9] {
            let s = slack_matrix(&ngon(n).unwrap()).unwrap();
            assert_eq!(rational_rank(s.as_rat()), 3, "n = {n}");
        }
        assert!(ngon(2).is_err());
    }

    #[test]
    fn bounds() {
        assert_eq!(cpsd_upper_bound(&ngon(6).unwrap()), 5);
        assert_eq!(cpsd_upper_bound(&ngon(9).unwrap()), 7);
        assert_eq!(cpsd_upper_bound(&cube()), 5);
        let simplex =
            PolytopeVH::parse("V:\n0,0,0\n1,0,0\n0,1,0\n0,0,1\nH:\n-1,0,0,0\n0,-1,0,0\n0,0,-1,0\n1,1,1,1\n").unwrap();
        assert_eq!(cpsd_upper_bound(&simplex), 4);
    }

    #[test]
    fn lift_witnesses() {
        for n in [3, 6, 9] {
            let p = ngon(n).unwrap();
            let lift = cpsd_lift_witness(&p).unwrap();
            let root = hadamard_sqrt(&slack_matrix(&p).unwrap());
            assert!(lift.witness.modulus_deviation(&root) <= 1e-9);
            assert_eq!(lift.bound, cpsd_upper_bound(&p));
            assert!(numerical_rank(&lift.witness, WITNESS_RANK_TOL) <= lift.bound, "n = {n}");
        }
    }
}
