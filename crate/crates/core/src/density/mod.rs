//! Whether holomorphic polynomials are dense in `L^2(mu_alpha)`: the
//! algebraic obstruction, the explicit `r_j` in the dense case, and a
//! least-squares probe of the conjugate coordinates.

mod gram;
mod lemma;
mod obstruction;
mod report;
mod rj;

pub use gram::{gram_residual, gram_residuals, monomial_basis, GramSystem, Target, PSD_TOL, SPECTRAL_CUTOFF};
pub use lemma::{hull_margin, lemma_lower_bound_test, random_admissible_instance, LemmaOutcome};
pub use obstruction::{obstruction_detect, ObstructionVerdict, Prediction, VariableContent};
pub use report::{analyze_density, DensityConfig, DensityReport, ResidualEntry, RjSummary};
pub use rj::{
    build_rj, denominator_on_ray, rj_ray_bound_check, RayBoundReport, RayStep, RjFunction, RJ_MIN_PASS_RATE, RJ_TOL,
};
