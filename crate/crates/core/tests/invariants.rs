//! Property tests for verdict invariances across the public API.

use phaseless::matrix::NonnegMatrix;
use phaseless::rank::{bracket, decide_nonmaximal, lower_bound_hadamard, Effort};
use phaseless::rational::{int, ratio};
use proptest::prelude::*;

fn matrix(max_dim: usize) -> impl Strategy<Value = NonnegMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(n, m)| {
        prop::collection::vec(0i64..8, n * m)
            .prop_map(move |v| NonnegMatrix::new(n, m, v.into_iter().map(int).collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permutations_and_scalings_keep_the_verdict(a in matrix(5), seed in 0u64..1000) {
        let base = decide_nonmaximal(&a).unwrap().is_nonmaximal();
        let rows: Vec<usize> = (0..a.rows()).map(|i| (i + seed as usize) % a.rows()).rev().collect();
        let cols: Vec<usize> = (0..a.cols()).map(|j| (j * 7 + seed as usize) % a.cols()).collect();
        let mut cols_sorted = cols.clone();
        cols_sorted.sort();
        cols_sorted.dedup();
        let cols = if cols_sorted.len() == a.cols() { cols } else { (0..a.cols()).collect() };
        let p = a.permute_rows(&rows).permute_columns(&cols);
        prop_assert_eq!(decide_nonmaximal(&p).unwrap().is_nonmaximal(), base);
        let rs: Vec<_> = (0..a.rows()).map(|i| ratio(i as i64 + 1 + seed as i64 % 5, 3)).collect();
        let cs: Vec<_> = (0..a.cols()).map(|j| ratio(2, j as i64 + 1)).collect();
        prop_assert_eq!(decide_nonmaximal(&a.scale(&rs, &cs).unwrap()).unwrap().is_nonmaximal(), base);
        prop_assert_eq!(decide_nonmaximal(&a.transpose()).unwrap().is_nonmaximal(), base);
    }

    #[test]
    fn hadamard_square_keeps_maximality(a in matrix(4)) {
        if !decide_nonmaximal(&a).unwrap().is_nonmaximal() {
            prop_assert!(!decide_nonmaximal(&a.hadamard_square()).unwrap().is_nonmaximal());
        }
    }

    #[test]
    fn brackets_are_ordered_and_certified(a in matrix(4)) {
        let b = bracket(&a, Effort::Low, 0).unwrap();
        prop_assert!(b.lower <= b.upper && b.upper <= a.min_dim());
        if b.lower >= 2 {
            prop_assert!(lower_bound_hadamard(&a) <= b.lower);
        }
        if let Some(w) = &b.upper_witness {
            prop_assert!(w.modulus_deviation(&a) <= 1e-9);
            prop_assert!(phaseless::matrix::numerical_rank(w, 1e-8) <= b.upper);
        }
    }
}
