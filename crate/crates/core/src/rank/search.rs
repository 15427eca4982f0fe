//! Heuristic search for low-rank equimodular matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::WITNESS_RANK_TOL;
use crate::error::{Error, Result};
use crate::matrix::{numerical_rank, NonnegMatrix, PhasedMatrix};

/// Iterations per restart.
pub const SEARCH_ITERATIONS: usize = 4000;

/// Looks for `B ∈ Ω(A)` of rank at most `target` by alternating projections:
/// truncate the SVD to `target` terms, then reset every modulus to `A`'s. Each
/// restart starts from phases drawn from a ChaCha stream seeded by
/// `seed + restart`. A result is returned only if its rank at tolerance 1e-8
/// is at most `target`.
pub fn phase_local_search(a: &NonnegMatrix, target: usize, restarts: usize, seed: u64) -> Result<Option<PhasedMatrix>> {
    let (n, m) = (a.rows(), a.cols());
    if target == 0 || target >= a.min_dim() {
        return Err(Error::Domain(format!("target rank {target} outside 1..{}", a.min_dim())));
    }
    let modulus = a.to_f64();
    let scale = modulus.iter().cloned().fold(0.0, f64::max).max(1.0);
    for restart in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64));
        let mut phases: Vec<f64> = (0..n * m).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        for _ in 0..SEARCH_ITERATIONS {
            let b = DMatrix::from_fn(n, m, |i, j| Complex64::from_polar(modulus[(i, j)], phases[i * m + j]));
            let svd = b.svd(true, true);
            let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
            order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
            if svd.singular_values[order[target]] <= 1e-3 * WITNESS_RANK_TOL * scale {
                break;
            }
            let (u, vt) = (svd.u.as_ref().expect("u"), svd.v_t.as_ref().expect("v_t"));
            let mut low = DMatrix::<Complex64>::zeros(n, m);
            for &s in &order[..target] {
                let sigma = svd.singular_values[s];
                low += u.column(s) * vt.row(s) * Complex64::new(sigma, 0.0);
            }
            for i in 0..n {
                for j in 0..m {
                    let z = low[(i, j)];
                    if z.norm() > 1e-300 {
                        phases[i * m + j] = z.arg();
                    }
                }
            }
        }
        let candidate = PhasedMatrix::new(a.clone(), phases)?;
        if numerical_rank(&candidate, WITNESS_RANK_TOL) <= target {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}
