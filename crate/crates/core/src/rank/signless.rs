use num_traits::Zero;

use super::signless_lower_bound;
use crate::error::{Error, Result};
use crate::matrix::{rational_rank, NonnegMatrix, RatMatrix};

/// Largest `(n−1)(m−1)` accepted by the sign enumeration.
pub const SIGNLESS_FREE_LIMIT: usize = 20;

/// Minimum rank over all real sign patterns on the entries of `A`.
///
/// Flipping the sign of a whole row or column keeps the rank, so the signs on a
/// spanning forest of the support (rows and columns as nodes, nonzero entries
/// as edges) are fixed to `+` and only the remaining entries are enumerated.
pub fn signless_rank_bruteforce(a: &NonnegMatrix) -> Result<usize> {
    let (n, m) = (a.rows(), a.cols());
    if (n - 1) * (m - 1) > SIGNLESS_FREE_LIMIT {
        return Err(Error::Capability {
            what: format!("signless enumeration of a {n}x{m} matrix"),
            limit: SIGNLESS_FREE_LIMIT,
        });
    }
    let free = free_entries(a);
    let floor = signless_lower_bound(a);
    let mut best = rational_rank(a.as_rat());
    for mask in 1u64..(1u64 << free.len()) {
        if best <= floor {
            break;
        }
        let mut data = a.entries().to_vec();
        for (bit, &(i, j)) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                data[i * m + j] = -&data[i * m + j];
            }
        }
        let r = rational_rank(&RatMatrix::new(n, m, data)?);
        best = best.min(r);
    }
    Ok(best)
}

/// Nonzero entries outside a spanning forest of the bipartite support graph.
fn free_entries(a: &NonnegMatrix) -> Vec<(usize, usize)> {
    let (n, m) = (a.rows(), a.cols());
    // Union-find over n row nodes followed by m column nodes.
    let mut parent: Vec<usize> = (0..n + m).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut free = Vec::new();
    for i in 0..n {
        for j in 0..m {
            if a.get(i, j).is_zero() {
                continue;
            }
            let (ri, cj) = (find(&mut parent, i), find(&mut parent, n + j));
            if ri == cj {
                free.push((i, j));
            } else {
                parent[ri] = cj;
            }
        }
    }
    free
}
