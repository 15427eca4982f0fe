//! Slack matrices and complex psd lifts of polytopes; equiangular lines and
//! mutually unbiased bases.

mod equiangular;
mod polytope;

pub use equiangular::{
    equiangular_matrix, mub_lower_bound, mub_matrix, mub_matrix_squared, small_angle_equiangular_max,
    verify_psd_witness, EquiangularBound, GramWitness, MODULUS_TOL, PSD_TOL,
};
pub use polytope::{cpsd_lift_witness, cpsd_upper_bound, ngon, slack_matrix, LiftWitness, PolytopeVH};
