//! Region scans of two-parameter matrix families.
//!
//! Each grid point is an exact rational `(s, t)`, so verdicts are exact unless a
//! custom template takes irrational square roots. Cells are evaluated in
//! parallel and assembled in index order, which keeps the CSV and SVG output
//! byte-identical across runs.

mod svg;
mod template;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::combinatorics::{combinations, permutations};
use crate::error::{Error, Result};
use crate::lp::{lp_feasible, nonmax_system};
use crate::matrix::NonnegMatrix;
use crate::rank::{int_det, integer_rows, robust_verdict, RobustVerdict, BOUNDARY_DELTA};
use crate::rational::{format_rational, int, ratio, rationalize, Rational, RATIONALIZE_TOL};
use crate::semialg::{semialg_general, SCAN_LIMIT};

pub use svg::{render_svg, verdict_color};
pub use template::{Template, Value};

/// Largest accepted grid resolution per axis.
pub const MAX_RESOLUTION: usize = 2001;

/// Per-cell classification. `InnerDeterminant` marks nonmaximal matrices whose
/// comparison determinants are all nonpositive; it is only reported for square
/// families of size at least 5, where that set is strictly smaller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellVerdict {
    OutsideCone,
    Maximal,
    Nonmaximal,
    BoundaryUncertain,
    InnerDeterminant,
}

impl CellVerdict {
    pub const ALL: [CellVerdict; 5] = [
        CellVerdict::OutsideCone,
        CellVerdict::Maximal,
        CellVerdict::Nonmaximal,
        CellVerdict::InnerDeterminant,
        CellVerdict::BoundaryUncertain,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CellVerdict::OutsideCone => "outside_cone",
            CellVerdict::Maximal => "maximal",
            CellVerdict::Nonmaximal => "nonmaximal",
            CellVerdict::BoundaryUncertain => "boundary_uncertain",
            CellVerdict::InnerDeterminant => "inner_determinant",
        }
    }

    /// Nonmaximal, including the inner determinant set.
    pub fn is_nonmaximal(self) -> bool {
        matches!(self, CellVerdict::Nonmaximal | CellVerdict::InnerDeterminant)
    }
}

impl fmt::Display for CellVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// The exact feasibility system.
    Lp,
    /// Determinant and leading-minor inequalities.
    Semialg,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Lp => "lp",
            Method::Semialg => "semialg",
        }
    }
}

/// A family evaluated at one point.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyPoint {
    OutsideCone,
    Exact(NonnegMatrix),
    /// Rationalized from irrational entries.
    Approximate(NonnegMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScanFamily {
    /// `[[1,s,t],[t,1,s],[s,t,1]]`.
    Circulant3,
    /// The 3×4 family whose four 3×3 blocks carve out the region.
    Param3x4,
    /// `s·Ī + t·Ē + (1−s−t)·J̄` with row-normalized `I₅`, the 5×5 example and `J₅`.
    Slice5,
    Custom(Template),
}

fn example5() -> [[i64; 5]; 5] {
    [[7, 4, 9, 10, 0], [9, 2, 3, 0, 3], [3, 10, 6, 4, 8], [0, 4, 1, 6, 4], [0, 3, 3, 10, 2]]
}

impl ScanFamily {
    /// Built-in family by name.
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "circulant3" => Ok(ScanFamily::Circulant3),
            "param3x4" => Ok(ScanFamily::Param3x4),
            "slice5" => Ok(ScanFamily::Slice5),
            other => Err(Error::Domain(format!(
                "unknown family {other:?} (expected circulant3, param3x4, slice5 or a custom template)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScanFamily::Circulant3 => "circulant3",
            ScanFamily::Param3x4 => "param3x4",
            ScanFamily::Slice5 => "slice5",
            ScanFamily::Custom(_) => "custom",
        }
    }

    /// Window used for both axes when none is given.
    pub fn default_window(&self) -> (Rational, Rational) {
        match self {
            ScanFamily::Circulant3 => (int(0), int(3)),
            ScanFamily::Param3x4 => (int(-2), int(2)),
            ScanFamily::Slice5 => (ratio(-1, 2), ratio(3, 2)),
            ScanFamily::Custom(_) => (int(0), int(1)),
        }
    }

    pub fn parameterization(&self) -> String {
        match self {
            ScanFamily::Circulant3 => "1,s,t; t,1,s; s,t,1".into(),
            ScanFamily::Param3x4 => "s-t+1,s-t+1,s+1,1; 1-s,-s+t+1,1-t,s+t+1; 1-t,1-s,1,s-t+1".into(),
            ScanFamily::Slice5 => "s*I5/1 + t*E/rowsums(E) + (1-s-t)*J5/5".into(),
            ScanFamily::Custom(t) => t.source().lines().map(str::trim).collect::<Vec<_>>().join("; "),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            ScanFamily::Circulant3 => (3, 3),
            ScanFamily::Param3x4 => (3, 4),
            ScanFamily::Slice5 => (5, 5),
            ScanFamily::Custom(t) => (t.rows(), t.cols()),
        }
    }

    /// Whether cells also report the inner determinant set.
    pub fn tracks_inner_set(&self) -> bool {
        let (n, m) = self.shape();
        n == m && (5..=SCAN_LIMIT).contains(&n)
    }

    pub fn evaluate(&self, s: &Rational, t: &Rational) -> Result<FamilyPoint> {
        let one = Rational::one();
        let exact = |rows: usize, cols: usize, data: Vec<Rational>| {
            if data.iter().any(Signed::is_negative) {
                Ok(FamilyPoint::OutsideCone)
            } else {
                NonnegMatrix::new(rows, cols, data).map(FamilyPoint::Exact)
            }
        };
        match self {
            ScanFamily::Circulant3 => exact(
                3,
                3,
                vec![one.clone(), s.clone(), t.clone(), t.clone(), one.clone(), s.clone(), s.clone(), t.clone(), one],
            ),
            ScanFamily::Param3x4 => {
                let d = s - t + &one;
                exact(
                    3,
                    4,
                    vec![
                        d.clone(),
                        d.clone(),
                        s + &one,
                        one.clone(),
                        &one - s,
                        t - s + &one,
                        &one - t,
                        s + t + &one,
                        &one - t,
                        &one - s,
                        one.clone(),
                        d,
                    ],
                )
            }
            ScanFamily::Slice5 => {
                let e = example5();
                let fifth = ratio(1, 5);
                let rest = &one - s - t;
                let mut data = Vec::with_capacity(25);
                for row in &e {
                    let sum: i64 = row.iter().sum();
                    for (j, &v) in row.iter().enumerate() {
                        let i_part = if data.len() / 5 == j { s.clone() } else { Rational::zero() };
                        data.push(i_part + t * ratio(v, sum) + &rest * &fifth);
                    }
                }
                exact(5, 5, data)
            }
            ScanFamily::Custom(template) => {
                let values = template.eval(s, t)?;
                if values.iter().any(|v| v.exact.as_ref().map_or(v.approx < 0.0, Signed::is_negative)) {
                    return Ok(FamilyPoint::OutsideCone);
                }
                if values.iter().all(|v| v.exact.is_some()) {
                    let data = values.into_iter().map(|v| v.exact.expect("checked")).collect();
                    return exact(template.rows(), template.cols(), data);
                }
                let data = values
                    .iter()
                    .map(|v| v.exact.clone().unwrap_or_else(|| rationalize(v.approx, RATIONALIZE_TOL)))
                    .collect();
                NonnegMatrix::new(template.rows(), template.cols(), data).map(FamilyPoint::Approximate)
            }
        }
    }
}

/// Nonmaximality through the exact feasibility system, after the cheap check
/// that uniform weights already work (no column of `b` is lopsided).
fn lp_nonmaximal(a: &NonnegMatrix) -> bool {
    let b = if a.rows() > a.cols() { a.transpose() } else { a.clone() };
    let uniform = (0..b.cols()).all(|j| {
        let col = b.column(j);
        let total: Rational = col.iter().sum();
        col.iter().all(|v| v + v <= total)
    });
    uniform || lp_feasible(&nonmax_system(&b)).is_feasible()
}

/// Nonmaximality through the semialgebraic description, block by block for
/// rectangular inputs.
fn semialg_nonmaximal(a: &NonnegMatrix) -> Result<bool> {
    let b = if a.rows() > a.cols() { a.transpose() } else { a.clone() };
    if b.is_square() {
        return Ok(semialg_general(&b)?.member);
    }
    for cols in combinations(b.cols(), b.rows()) {
        if !semialg_general(&b.select_columns(&cols))?.member {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `det 𝓜(AP) ≤ 0` for every `P`, stopping at the first positive determinant.
pub fn in_inner_determinant_set(a: &NonnegMatrix) -> Result<bool> {
    if !a.is_square() || a.rows() > SCAN_LIMIT {
        return Err(Error::Dimension(format!("determinant scan needs a square matrix of size ≤ {SCAN_LIMIT}")));
    }
    // Positive row scaling keeps every determinant's sign.
    let rows = integer_rows(a);
    let n = a.rows();
    for p in permutations(n) {
        let m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { rows[i][p[j]].clone() } else { -&rows[i][p[j]] }).collect())
            .collect();
        if int_det(m).is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Classifies the family at `(s, t)`.
pub fn classify(family: &ScanFamily, s: &Rational, t: &Rational, method: Method) -> Result<CellVerdict> {
    let a = match family.evaluate(s, t)? {
        FamilyPoint::OutsideCone => return Ok(CellVerdict::OutsideCone),
        FamilyPoint::Approximate(a) => {
            if method == Method::Semialg {
                return Err(Error::Domain("the semialgebraic method needs exact entries".into()));
            }
            return Ok(match robust_verdict(&a, BOUNDARY_DELTA) {
                RobustVerdict::Nonmaximal => CellVerdict::Nonmaximal,
                RobustVerdict::Maximal => CellVerdict::Maximal,
                RobustVerdict::BoundaryUncertain => CellVerdict::BoundaryUncertain,
            });
        }
        FamilyPoint::Exact(a) => a,
    };
    let nonmaximal = match method {
        Method::Lp => lp_nonmaximal(&a),
        Method::Semialg => semialg_nonmaximal(&a)?,
    };
    Ok(if !nonmaximal {
        CellVerdict::Maximal
    } else if family.tracks_inner_set() && in_inner_determinant_set(&a)? {
        CellVerdict::InnerDeterminant
    } else {
        CellVerdict::Nonmaximal
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub family: ScanFamily,
    pub s_range: (Rational, Rational),
    pub t_range: (Rational, Rational),
    pub resolution: usize,
    pub method: Method,
}

impl ScanConfig {
    /// Square grid over the family's default window.
    pub fn new(family: ScanFamily, resolution: usize, method: Method) -> Self {
        let window = family.default_window();
        Self { family, s_range: window.clone(), t_range: window, resolution, method }
    }
}

/// Verdicts on a `resolution × resolution` grid; cell `(i, j)` sits at
/// `(s_i, t_j)` and is stored at index `j·resolution + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionGrid {
    pub family: String,
    pub parameterization: String,
    pub method: Method,
    pub s_range: (Rational, Rational),
    pub t_range: (Rational, Rational),
    pub resolution: usize,
    pub cells: Vec<CellVerdict>,
}

fn grid_point(range: &(Rational, Rational), resolution: usize, i: usize) -> Rational {
    if resolution == 1 {
        return range.0.clone();
    }
    &range.0 + (&range.1 - &range.0) * ratio(i as i64, resolution as i64 - 1)
}

impl RegionGrid {
    pub fn s(&self, i: usize) -> Rational {
        grid_point(&self.s_range, self.resolution, i)
    }

    pub fn t(&self, j: usize) -> Rational {
        grid_point(&self.t_range, self.resolution, j)
    }

    pub fn cell(&self, i: usize, j: usize) -> CellVerdict {
        self.cells[j * self.resolution + i]
    }

    pub fn count(&self, v: CellVerdict) -> usize {
        self.cells.iter().filter(|&&c| c == v).count()
    }

    /// Header lines with the family, method and window, then `s,t,verdict` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out += &format!("# family: {}\n", self.family);
        out += &format!("# parameterization: {}\n", self.parameterization);
        out += &format!("# method: {}\n", self.method.label());
        out += &format!("# s_range: {},{}\n", format_rational(&self.s_range.0), format_rational(&self.s_range.1));
        out += &format!("# t_range: {},{}\n", format_rational(&self.t_range.0), format_rational(&self.t_range.1));
        out += &format!("# resolution: {}\n", self.resolution);
        out += "s,t,verdict\n";
        for j in 0..self.resolution {
            let t = format_rational(&self.t(j));
            for i in 0..self.resolution {
                out += &format!("{},{},{}\n", format_rational(&self.s(i)), t, self.cell(i, j));
            }
        }
        out
    }
}

/// Evaluates every cell, in parallel on the current rayon pool.
pub fn run_scan(config: &ScanConfig) -> Result<RegionGrid> {
    let n = config.resolution;
    if n == 0 || n > MAX_RESOLUTION {
        return Err(Error::Domain(format!("grid resolution must be in 1..={MAX_RESOLUTION}, got {n}")));
    }
    for (name, r) in [("s", &config.s_range), ("t", &config.t_range)] {
        if r.0 > r.1 {
            return Err(Error::Domain(format!("empty {name} range")));
        }
    }
    if config.method == Method::Semialg {
        let (rows, cols) = config.family.shape();
        if rows.min(cols) > SCAN_LIMIT {
            return Err(Error::Capability { what: "semialgebraic scan".into(), limit: SCAN_LIMIT });
        }
    }
    let cells = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let s = grid_point(&config.s_range, n, k % n);
            let t = grid_point(&config.t_range, n, k / n);
            classify(&config.family, &s, &t, config.method)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionGrid {
        family: config.family.name().to_string(),
        parameterization: config.family.parameterization(),
        method: config.method,
        s_range: config.s_range.clone(),
        t_range: config.t_range.clone(),
        resolution: n,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::decide_nonmaximal;

    fn expected_circulant(s: &Rational, t: &Rational) -> CellVerdict {
        let one = Rational::one();
        if s + t >= one && (s - t).abs() <= one {
            CellVerdict::Nonmaximal
        } else {
            CellVerdict::Maximal
        }
    }

    #[test]
    fn circulant_region_on_a_coarse_grid() {
        for method in [Method::Lp, Method::Semialg] {
            let grid = run_scan(&ScanConfig::new(ScanFamily::Circulant3, 31, method)).unwrap();
            assert_eq!(grid.cells.len(), 31 * 31);
            for j in 0..31 {
                for i in 0..31 {
                    assert_eq!(grid.cell(i, j), expected_circulant(&grid.s(i), &grid.t(j)), "({i}, {j})");
                }
            }
        }
    }

    #[test]
    fn param3x4_agrees_with_direct_decision() {
        let family = ScanFamily::Param3x4;
        let lp = run_scan(&ScanConfig::new(family.clone(), 9, Method::Lp)).unwrap();
        let sa = run_scan(&ScanConfig::new(family.clone(), 9, Method::Semialg)).unwrap();
        assert_eq!(lp.cells, sa.cells);
        assert!(lp.count(CellVerdict::OutsideCone) > 0);
        for j in 0..9 {
            for i in 0..9 {
                if let FamilyPoint::Exact(a) = family.evaluate(&lp.s(i), &lp.t(j)).unwrap() {
                    assert_eq!(decide_nonmaximal(&a).unwrap().is_nonmaximal(), lp.cell(i, j).is_nonmaximal());
                }
            }
        }
    }

    #[test]
    fn slice5_anchor_points() {
        let f = ScanFamily::Slice5;
        // The normalized example at (0, 1): nonmaximal, outside the inner set.
        assert_eq!(classify(&f, &int(0), &int(1), Method::Lp).unwrap(), CellVerdict::Nonmaximal);
        // The identity is maximal and J₅/5 lies in the inner set.
        assert_eq!(classify(&f, &int(1), &int(0), Method::Lp).unwrap(), CellVerdict::Maximal);
        assert_eq!(classify(&f, &int(0), &int(0), Method::Lp).unwrap(), CellVerdict::InnerDeterminant);
        assert_eq!(classify(&f, &int(-1), &int(0), Method::Lp).unwrap(), CellVerdict::OutsideCone);
        match f.evaluate(&ratio(1, 3), &ratio(1, 4)).unwrap() {
            FamilyPoint::Exact(a) => {
                for i in 0..5 {
                    assert_eq!(a.row(i).iter().sum::<Rational>(), Rational::one());
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn custom_templates() {
        let circ = ScanFamily::Custom(Template::parse("1,s,t\nt,1,s\ns,t,1").unwrap());
        let a =
            run_scan(&ScanConfig { family: circ, ..ScanConfig::new(ScanFamily::Circulant3, 13, Method::Lp) }).unwrap();
        let b = run_scan(&ScanConfig::new(ScanFamily::Circulant3, 13, Method::Lp)).unwrap();
        assert_eq!(a.cells, b.cells);

        // The circulant at x = √2·s: irrational entries go through the margin test.
        let irr = ScanFamily::Custom(Template::parse("1,sqrt(2)*s,t; t,1,sqrt(2)*s; sqrt(2)*s,t,1").unwrap());
        let r = rationalize(std::f64::consts::FRAC_1_SQRT_2, 1e-15);
        assert_eq!(classify(&irr, &r, &int(0), Method::Lp).unwrap(), CellVerdict::BoundaryUncertain);
        assert_eq!(classify(&irr, &r, &ratio(1, 2), Method::Lp).unwrap(), CellVerdict::Nonmaximal);
        assert_eq!(classify(&irr, &int(2), &int(0), Method::Lp).unwrap(), CellVerdict::Maximal);
        assert!(classify(&irr, &r, &int(0), Method::Semialg).is_err());
    }

    #[test]
    fn csv_is_deterministic_and_complete() {
        let config = ScanConfig::new(ScanFamily::Circulant3, 5, Method::Lp);
        let a = run_scan(&config).unwrap().to_csv();
        let b = run_scan(&config).unwrap().to_csv();
        assert_eq!(a, b);
        assert!(a.contains("# s_range: 0,3\n"));
        assert_eq!(a.lines().filter(|l| !l.starts_with('#')).count(), 26);
        assert!(a.contains("\n3/4,0,maximal\n"));
    }

    #[test]
    fn bad_configs() {
        assert!(ScanFamily::named("mystery").is_err());
        assert!(run_scan(&ScanConfig::new(ScanFamily::Circulant3, 0, Method::Lp)).is_err());
        assert!(run_scan(&ScanConfig::new(ScanFamily::Circulant3, 2002, Method::Lp)).is_err());
        let mut c = ScanConfig::new(ScanFamily::Circulant3, 3, Method::Lp);
        c.s_range = (int(1), int(0));
        assert!(run_scan(&c).is_err());
    }

    #[test]
    fn inner_set_is_inside_nonmaximal_set() {
        let grid = run_scan(&ScanConfig::new(ScanFamily::Slice5, 11, Method::Lp)).unwrap();
        assert!(grid.count(CellVerdict::InnerDeterminant) > 0);
        for j in 0..11 {
            for i in 0..11 {
                if let FamilyPoint::Exact(a) = ScanFamily::Slice5.evaluate(&grid.s(i), &grid.t(j)).unwrap() {
                    let inner = in_inner_determinant_set(&a).unwrap();
                    assert_eq!(inner, grid.cell(i, j) == CellVerdict::InnerDeterminant);
                    assert!(!inner || lp_nonmaximal(&a));
                }
            }
        }
    }
}
