//! Lower and upper bounds on the phaseless rank.

use num_traits::Zero;

use super::{build_witness, decide_nonmaximal, oriented, phase_local_search, RankDecision, WITNESS_RANK_TOL};
use super::{robust_verdict, RobustVerdict, BOUNDARY_DELTA};
use crate::error::{Error, Result};
use crate::lopsided::WeightVector;
use crate::lp::{lp_feasible, nonmax_system, nonmax_system_with_margin, LpOutcome};
use crate::matrix::{numerical_rank, rational_rank, NonnegMatrix, PhasedMatrix};
use crate::rational::{ceil_sqrt, rationalize};

/// `⌈√r⌉` with `r = rank(A∘A)`.
pub fn lower_bound_hadamard(a: &NonnegMatrix) -> usize {
    ceil_sqrt(rational_rank(a.hadamard_square().as_rat()) as u64) as usize
}

/// Smallest `s` with `s(s+1)/2 ≥ rank(A∘A)`, a lower bound on the signless rank.
pub fn signless_lower_bound(a: &NonnegMatrix) -> usize {
    let r = rational_rank(a.hadamard_square().as_rat());
    (0..).find(|s| s * (s + 1) / 2 >= r).expect("unbounded search")
}

/// Bounds on the smallest typical phaseless rank of `n×m` matrices.
///
/// The lower bound is the smallest integer `k ≥ (n + m − √((n−1)² + (m−1)²))/2`,
/// found with integer arithmetic only. The order of `n, m` does not matter.
pub fn typical_rank_bounds(n: usize, m: usize) -> Result<(usize, usize)> {
    let (n, m) = if n <= m { (n, m) } else { (m, n) };
    if n < 3 {
        return Err(Error::Domain(format!("typical rank bounds need both sizes at least 3, got {n}")));
    }
    let s = ((n - 1) * (n - 1) + (m - 1) * (m - 1)) as i128;
    let lower = (0..=n)
        .find(|&k| {
            let gap = (n + m) as i128 - 2 * k as i128;
            gap <= 0 || gap * gap <= s
        })
        .expect("k = n always qualifies");
    Ok((lower, (n + 2) / 2))
}

/// Result of the row-block patching construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchingBound {
    pub bound: usize,
    pub witness: PhasedMatrix,
    /// Set when a block was only nonmaximal up to boundary rounding.
    pub approximate: bool,
}

/// `rank_θ(A) ≤ n − ⌊(n−1)/(k−1)⌋` with an explicit witness.
///
/// Rows `1..` are cut into `⌊(n−1)/(k−1)⌋` groups of `k−1`, each completed with
/// row 0 into a `k×m` block. Every block gets a witness of nonmaximal rank whose
/// row 0 is real and positive, so the blocks agree on the shared row; leftover
/// rows keep phase 0. Each block then has a row in the span of its other rows,
/// and removing one such row per block leaves `n − ⌊(n−1)/(k−1)⌋` rows.
pub fn upper_bound_patching(a: &NonnegMatrix, k: usize) -> Result<PatchingBound> {
    let (b, transposed) = oriented(a);
    let (n, m) = (b.rows(), b.cols());
    if k < 2 || k > n {
        return Err(Error::Domain(format!("block size {k} outside 2..={n}")));
    }
    if b.row(0).iter().all(Zero::is_zero) {
        return Err(Error::Domain("the shared first row must be nonzero".into()));
    }
    let blocks = (n - 1) / (k - 1);
    let mut phases = vec![0.0; n * m];
    let mut approximate = false;
    for blk in 0..blocks {
        let rows: Vec<usize> = std::iter::once(0).chain(1 + blk * (k - 1)..1 + (blk + 1) * (k - 1)).collect();
        let sub = b.select_rows(&rows);
        let lambda = match lp_feasible(&nonmax_system(&sub)) {
            LpOutcome::Feasible(x) => WeightVector::new(x)?,
            LpOutcome::Infeasible(_) => {
                if robust_verdict(&sub, BOUNDARY_DELTA) != RobustVerdict::BoundaryUncertain {
                    return Err(Error::BoundInapplicable { block: rows });
                }
                approximate = true;
                let delta = rationalize(BOUNDARY_DELTA, BOUNDARY_DELTA * 1e-3);
                let LpOutcome::Feasible(x) = lp_feasible(&nonmax_system_with_margin(&sub, &delta)) else {
                    return Err(Error::BoundInapplicable { block: rows });
                };
                WeightVector::new(x)?
            }
        };
        let w = match build_witness(&sub, &lambda) {
            Ok(w) => w,
            Err(Error::Lopsided { .. }) if approximate => approximate_witness(&sub, &lambda),
            Err(e) => return Err(e),
        };
        // build_witness makes the first nonzero entry of each column real, which
        // is row 0 whenever that entry is nonzero; zero entries have phase 0.
        for (local, &global) in rows.iter().enumerate() {
            for j in 0..m {
                phases[global * m + j] = w.phase(local, j);
            }
        }
    }
    let witness = PhasedMatrix::new(b, phases)?;
    let bound = n - blocks;
    let witness = if transposed { witness.transpose() } else { witness };
    if !approximate && numerical_rank(&witness, WITNESS_RANK_TOL) > bound {
        return Err(Error::Inconsistent(format!("patched witness exceeds rank {bound}")));
    }
    Ok(PatchingBound { bound, witness, approximate })
}

/// Witness for weights that are nonlopsided only up to rounding: columns that
/// are slightly lopsided get the collinear closure.
fn approximate_witness(a: &NonnegMatrix, lambda: &WeightVector) -> PhasedMatrix {
    let (n, m) = (a.rows(), a.cols());
    let mut phases = vec![0.0; n * m];
    for j in 0..m {
        let weighted: Vec<_> = (0..n).map(|k| &lambda.as_slice()[k] * a.get(k, j)).collect();
        let col = super::close_column(&weighted);
        let rot = (0..n).find(|&k| !a.get(k, j).is_zero()).map_or(0.0, |k| col[k]);
        for k in 0..n {
            phases[k * m + j] = col[k] - rot;
        }
    }
    PhasedMatrix::new(a.clone(), phases).expect("matching dimensions")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Effort {
    Low,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LowerSource {
    /// Rank one is detected exactly; anything else has phaseless rank ≥ 2.
    RankOne,
    HadamardSquare,
    Maximality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpperSource {
    Patching(usize),
    NonmaxDirect,
    TrivialMin,
    LocalSearch,
    /// The ordinary rank, witnessed by `A` itself.
    UsualRank,
}

/// Proven bounds `lower ≤ rank_θ(A) ≤ upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bracket {
    pub lower: usize,
    pub upper: usize,
    pub lower_source: LowerSource,
    pub upper_source: UpperSource,
    pub upper_witness: Option<PhasedMatrix>,
}

impl Bracket {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

/// Combines every applicable bound. The search effort only affects the upper
/// bound: `High` additionally tries local search below the best proven bound.
pub fn bracket(a: &NonnegMatrix, effort: Effort, seed: u64) -> Result<Bracket> {
    let min_dim = a.min_dim();
    let r = rational_rank(a.as_rat());
    if r <= 1 {
        return Ok(Bracket {
            lower: r,
            upper: r,
            lower_source: LowerSource::RankOne,
            upper_source: UpperSource::UsualRank,
            upper_witness: Some(PhasedMatrix::zero_phase(a.clone())),
        });
    }

    let mut lower = 2;
    let mut lower_source = LowerSource::RankOne;
    let had = lower_bound_hadamard(a);
    if had >= lower {
        lower = had;
        lower_source = LowerSource::HadamardSquare;
    }

    let decision = decide_nonmaximal(a)?;
    let RankDecision::Nonmaximal { witness: direct, .. } = decision else {
        return Ok(Bracket {
            lower: min_dim,
            upper: min_dim,
            lower_source: LowerSource::Maximality,
            upper_source: UpperSource::TrivialMin,
            upper_witness: None,
        });
    };

    let mut upper = min_dim - 1;
    let mut upper_source = UpperSource::NonmaxDirect;
    let mut witness = Some(direct);

    let (b, _) = oriented(a);
    if b.row(0).iter().any(|v| !v.is_zero()) {
        for k in 2..min_dim {
            let candidate = min_dim - (min_dim - 1) / (k - 1);
            if candidate >= upper {
                continue;
            }
            match upper_bound_patching(a, k) {
                Ok(p) if !p.approximate => {
                    upper = p.bound;
                    upper_source = UpperSource::Patching(k);
                    witness = Some(p.witness);
                    break;
                }
                Ok(_) | Err(Error::BoundInapplicable { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    if r < upper {
        upper = r;
        upper_source = UpperSource::UsualRank;
        witness = Some(PhasedMatrix::zero_phase(a.clone()));
    }

    if effort == Effort::High {
        while upper > lower {
            match phase_local_search(a, upper - 1, 8, seed)? {
                Some(w) => {
                    upper -= 1;
                    upper_source = UpperSource::LocalSearch;
                    witness = Some(w);
                }
                None => break,
            }
        }
    }

    debug_assert!(lower <= upper);
    Ok(Bracket { lower, upper, lower_source, upper_source, upper_witness: witness })
}
