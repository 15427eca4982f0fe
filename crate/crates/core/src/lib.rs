//! Phaseless rank of nonnegative matrices.
//!
//! The phaseless rank of `A ≥ 0` is the smallest rank of a complex matrix whose
//! entrywise moduli equal `A`. This crate decides whether it is maximal (an exact
//! rational linear feasibility problem), produces checkable certificates either
//! way, brackets the rank between proven bounds, and applies the machinery to
//! amoeba membership, complex semidefinite lifts of polytopes, equiangular lines
//! and mutually unbiased bases.
//!
//! ```
//! use phaseless::{matrix::NonnegMatrix, rank::{decide_nonmaximal, RankDecision}};
//!
//! let d4 = NonnegMatrix::parse("0,1,1,1\n1,0,1,1\n1,1,0,1\n1,1,1,0").unwrap();
//! assert!(matches!(decide_nonmaximal(&d4).unwrap(), RankDecision::Nonmaximal { .. }));
//! ```

pub mod applications;
pub mod certificate;
pub mod combinatorics;
pub mod error;
pub mod lopsided;
pub mod lp;
pub mod matrix;
pub mod mmatrix;
pub mod rank;
pub mod rational;
pub mod scan;
pub mod semialg;

pub use error::{Error, Result};
