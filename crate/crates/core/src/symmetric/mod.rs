//! The Cartan domain of 2x2 matrices of norm < 1 and the example function
//! `phi_i22` living on it.

mod demo;
mod family;
mod matrix;

pub use demo::{
    adjugate_identity_probe, adjugate_prediction, dense_tolerance, innerness_sweep, jacobian_sweep, run_demo, DemoConfig, DemoReport,
    DensitySummary, InnernessSummary, JacobianSummary, TorusSummary, DENSE_MAX, FAMILY_TOL, INNER_TOL,
    JACOBIAN_MIN_DET, JACOBIAN_REL_TOL, NOT_DENSE_MIN, POLE_EXCLUSION,
};
pub use family::{
    family_conditions, family_matrix, family_matrix_product, jacobian_closed_form, jacobian_rank_check,
    level_residual, phi_i22, torus_family, FamilyResiduals, JacobianCheck, TorusFamily, JACOBIAN_STEP,
};
pub use matrix::{haar_sample, haar_unitary, MatrixPoint};
