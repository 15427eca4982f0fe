//! Exact rational LP feasibility with certificates.
//!
//! [`lp_feasible`] runs a phase-1 simplex over arbitrary-precision rationals with
//! Bland's rule. A feasible system yields a point that satisfies every constraint
//! exactly; an infeasible one yields Farkas multipliers that combine the rows into
//! `c·x ≤ δ` with `c·x ≥ 0` on the feasible cone and `δ < 0`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::NonnegMatrix;
use crate::rational::Rational;

/// `G·x ≤ h`, `E·x = f`, and `x_j ≥ 0` for flagged variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    num_vars: usize,
    ineq: Vec<(Vec<Rational>, Rational)>,
    eq: Vec<(Vec<Rational>, Rational)>,
    nonneg: Vec<bool>,
}

impl LinearProgram {
    /// A system over `num_vars` free variables and no constraints.
    pub fn new(num_vars: usize) -> Self {
        Self { num_vars, ineq: Vec::new(), eq: Vec::new(), nonneg: vec![false; num_vars] }
    }

    /// A system whose variables are all nonnegative.
    pub fn nonnegative(num_vars: usize) -> Self {
        Self { nonneg: vec![true; num_vars], ..Self::new(num_vars) }
    }

    fn check_len(&self, coeffs: &[Rational]) -> Result<()> {
        if coeffs.len() != self.num_vars {
            return Err(Error::Dimension(format!(
                "constraint has {} coefficients for {} variables",
                coeffs.len(),
                self.num_vars
            )));
        }
        Ok(())
    }

    /// Adds `coeffs · x ≤ rhs`.
    pub fn add_le(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> Result<()> {
        self.check_len(&coeffs)?;
        self.ineq.push((coeffs, rhs));
        Ok(())
    }

    /// Adds `coeffs · x ≥ rhs` (stored negated).
    pub fn add_ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> Result<()> {
        self.add_le(coeffs.into_iter().map(|c| -c).collect(), -rhs)
    }

    pub fn add_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> Result<()> {
        self.check_len(&coeffs)?;
        self.eq.push((coeffs, rhs));
        Ok(())
    }

    pub fn set_nonneg(&mut self, var: usize, flag: bool) {
        self.nonneg[var] = flag;
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn inequalities(&self) -> &[(Vec<Rational>, Rational)] {
        &self.ineq
    }

    pub fn equalities(&self) -> &[(Vec<Rational>, Rational)] {
        &self.eq
    }

    pub fn nonneg_flags(&self) -> &[bool] {
        &self.nonneg
    }

    /// Exact check of every constraint.
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        let dot = |c: &[Rational]| c.iter().zip(x).map(|(a, b)| a * b).sum::<Rational>();
        self.nonneg.iter().zip(x).all(|(&nn, v)| !nn || !v.is_negative())
            && self.ineq.iter().all(|(c, h)| dot(c) <= *h)
            && self.eq.iter().all(|(c, f)| dot(c) == *f)
    }

    /// Exact check of the Farkas sign conditions for `cert`.
    pub fn is_refuted_by(&self, cert: &FarkasCertificate) -> bool {
        if cert.ineq.len() != self.ineq.len() || cert.eq.len() != self.eq.len() {
            return false;
        }
        if cert.ineq.iter().any(Signed::is_negative) {
            return false;
        }
        let (combined, rhs) = cert.combine(self);
        let sign_ok = combined.iter().zip(&self.nonneg).all(|(c, &nn)| if nn { !c.is_negative() } else { c.is_zero() });
        sign_ok && rhs.is_negative()
    }
}

/// Multipliers proving infeasibility: `ineq ≥ 0` for the `≤` rows and free
/// multipliers for the equality rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub ineq: Vec<Rational>,
    pub eq: Vec<Rational>,
}

impl FarkasCertificate {
    /// The combined row `Σ y_i row_i` and right-hand side `Σ y_i rhs_i`.
    pub fn combine(&self, p: &LinearProgram) -> (Vec<Rational>, Rational) {
        let mut coeffs = vec![Rational::zero(); p.num_vars];
        let mut rhs = Rational::zero();
        let rows = p.ineq.iter().zip(&self.ineq).chain(p.eq.iter().zip(&self.eq));
        for ((c, h), y) in rows {
            if y.is_zero() {
                continue;
            }
            for (acc, a) in coeffs.iter_mut().zip(c) {
                *acc += y * a;
            }
            rhs += y * h;
        }
        (coeffs, rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(Vec<Rational>),
    Infeasible(FarkasCertificate),
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Feasible(x) => Some(x),
            LpOutcome::Infeasible(_) => None,
        }
    }
}

/// Dense phase-1 tableau.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    /// Reduced costs, with the negated objective in the last slot.
    cost: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        if !inv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for &j in &nz {
                row[j] -= &f * &pivot_row[j];
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Bland's rule until no reduced cost is negative.
    fn run(&mut self) {
        let rhs = self.width();
        while let Some(c) = (0..rhs).find(|&j| self.cost[j].is_negative()) {
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            // Phase 1 is bounded below by zero, so a leaving row always exists.
            let (r, _) = leave.expect("phase-1 objective is bounded");
            self.pivot(r, c);
        }
    }
}

/// Decides feasibility of `p` exactly; the outcome always carries a certificate
/// that re-verifies by substitution or row combination.
pub fn lp_feasible(p: &LinearProgram) -> LpOutcome {
    // Column layout: structural columns (free variables split in two), one slack
    // per inequality, then artificials for rows without a usable slack.
    let mut var_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(p.num_vars);
    let mut ncols = 0;
    for &nn in &p.nonneg {
        if nn {
            var_cols.push((ncols, None));
            ncols += 1;
        } else {
            var_cols.push((ncols, Some(ncols + 1)));
            ncols += 2;
        }
    }
    let slack_start = ncols;
    ncols += p.ineq.len();
    let m = p.ineq.len() + p.eq.len();

    // Row signs after making right-hand sides nonnegative.
    let mut sign = Vec::with_capacity(m);
    let mut needs_artificial = Vec::with_capacity(m);
    for (_, h) in &p.ineq {
        let neg = h.is_negative();
        sign.push(if neg { -Rational::one() } else { Rational::one() });
        needs_artificial.push(neg);
    }
    for (_, f) in &p.eq {
        sign.push(if f.is_negative() { -Rational::one() } else { Rational::one() });
        needs_artificial.push(true);
    }
    let art_start = ncols;
    let n_art = needs_artificial.iter().filter(|&&b| b).count();
    ncols += n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut initial_col = Vec::with_capacity(m);
    let mut next_art = art_start;
    let all_rows = p.ineq.iter().map(|r| (r, true)).chain(p.eq.iter().map(|r| (r, false)));
    for (i, ((coeffs, rhs), is_ineq)) in all_rows.enumerate() {
        let s = &sign[i];
        let mut row = vec![Rational::zero(); ncols + 1];
        for (v, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (pos, neg) = var_cols[v];
            row[pos] = s * a;
            if let Some(neg) = neg {
                row[neg] = -(s * a);
            }
        }
        if is_ineq {
            row[slack_start + i] = s.clone();
        }
        row[ncols] = s * rhs;
        let start = if needs_artificial[i] {
            row[next_art] = Rational::one();
            next_art += 1;
            next_art - 1
        } else {
            slack_start + i
        };
        basis.push(start);
        initial_col.push(start);
        rows.push(row);
    }

    // Reduced costs of the phase-1 objective (sum of artificials).
    let mut cost = vec![Rational::zero(); ncols + 1];
    for c in &mut cost[art_start..ncols] {
        *c = Rational::one();
    }
    for (row, &b) in rows.iter().zip(&basis) {
        if b >= art_start {
            for (c, v) in cost.iter_mut().zip(row) {
                if !v.is_zero() {
                    *c -= v;
                }
            }
        }
    }

    let mut t = Tableau { rows, cost, basis };
    t.run();

    let objective = -t.cost[ncols].clone();
    if objective.is_zero() {
        let mut values = vec![Rational::zero(); ncols];
        for (row, &b) in t.rows.iter().zip(&t.basis) {
            values[b] = row[ncols].clone();
        }
        let x = var_cols
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => &values[pos] - &values[neg],
                None => values[pos].clone(),
            })
            .collect();
        return LpOutcome::Feasible(x);
    }

    // Phase-1 duals w = c_B B⁻¹, read off the columns of the initial basis.
    let c_b: Vec<Rational> =
        t.basis.iter().map(|&b| if b >= art_start { Rational::one() } else { Rational::zero() }).collect();
    let y: Vec<Rational> = (0..m)
        .map(|i| {
            let col = initial_col[i];
            let w: Rational = t.rows.iter().zip(&c_b).filter(|(_, c)| !c.is_zero()).map(|(row, c)| c * &row[col]).sum();
            -(&sign[i] * w)
        })
        .collect();
    let (ineq, eq) = y.split_at(p.ineq.len());
    LpOutcome::Infeasible(FarkasCertificate { ineq: ineq.to_vec(), eq: eq.to_vec() })
}

/// The system `A_ij λ_i ≤ Σ_{k≠i} A_kj λ_k + margin`, `λ ≥ 0`, `Σ λ = 1` whose
/// feasibility (at margin 0) is equivalent to nonmaximal phaseless rank of an
/// `n×m` matrix with `n ≤ m`.
pub fn nonmax_system_with_margin(a: &NonnegMatrix, margin: &Rational) -> LinearProgram {
    let n = a.rows();
    let mut lp = LinearProgram::nonnegative(n);
    for j in 0..a.cols() {
        for i in 0..n {
            let coeffs = (0..n).map(|k| if k == i { a.get(k, j).clone() } else { -a.get(k, j) }).collect();
            lp.add_le(coeffs, margin.clone()).expect("n coefficients");
        }
    }
    lp.add_eq(vec![Rational::one(); n], Rational::one()).expect("n coefficients");
    lp
}

/// The nonmaximality system of `a` (rows ≤ columns expected; transpose otherwise).
pub fn nonmax_system(a: &NonnegMatrix) -> LinearProgram {
    nonmax_system_with_margin(a, &Rational::zero())
}
