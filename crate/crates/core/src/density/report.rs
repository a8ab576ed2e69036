use num_complex::Complex64;
use serde::Serialize;

use super::gram::{gram_residuals, Target};
use super::obstruction::{obstruction_detect, Prediction, VariableContent};
use super::rj::{build_rj, rj_ray_bound_check, RayBoundReport};
use crate::clark::{assemble_polydisc, FiberOptions, RationalInnerFn};
use crate::error::Result;
use crate::poly::{DEFAULT_TOL_CIRCLE, DEFAULT_TOL_RANK};

/// Knobs of the density analysis. The residual thresholds are calibrated at
/// fiber grid 512.
#[derive(Clone, Debug, Serialize)]
pub struct DensityConfig {
    pub grid: usize,
    pub n_theta: usize,
    #[serde(rename = "N")]
    pub degree: u32,
    pub seed: u64,
    pub tol_rank: f64,
    pub tol_circle: f64,
    /// Dense cases must reach a residual at or below this.
    pub dense_threshold: f64,
    /// Non-dense cases must keep some residual at or above this.
    pub not_dense_threshold: f64,
    pub rhos: Vec<f64>,
}

impl Default for DensityConfig {
    fn default() -> Self {
        Self {
            grid: 512,
            n_theta: 2048,
            degree: 6,
            seed: 0,
            tol_rank: DEFAULT_TOL_RANK,
            tol_circle: DEFAULT_TOL_CIRCLE,
            dense_threshold: 1e-3,
            not_dense_threshold: 0.1,
            rhos: vec![0.9, 0.99, 0.999],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualEntry {
    pub target: String,
    #[serde(rename = "N")]
    pub degree: u32,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RjSummary {
    pub j: usize,
    pub numerator: String,
    pub denominator: String,
    pub validation_pass_rate: f64,
    pub ray: RayBoundReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub alpha: Complex64,
    pub prediction: Prediction,
    pub per_variable: Vec<VariableContent>,
    pub residuals: Vec<ResidualEntry>,
    /// One entry per variable, dense cases only.
    pub rj: Vec<RjSummary>,
    /// `max_j residual(conj z_j)` at the configured `N`.
    pub max_residual: f64,
    /// Whether the residual dichotomy agrees with the prediction.
    pub consistent: bool,
}

/// Runs the obstruction detector, the Gram-residual probe for every
/// conjugate coordinate and, in dense cases, the `r_j` construction.
pub fn analyze_density(phi: &RationalInnerFn, alpha: Complex64, cfg: &DensityConfig) -> Result<DensityReport> {
    let verdict = obstruction_detect(phi, alpha, cfg.tol_rank, cfg.tol_circle)?;
    let opts = FiberOptions {
        tol_circle: cfg.tol_circle,
        ..FiberOptions::default()
    };
    let mu = assemble_polydisc(phi, alpha, cfg.grid, cfg.seed, &opts)?;
    let targets: Vec<Target> = (0..phi.nvars()).map(Target::conj).collect();
    let residuals: Vec<ResidualEntry> = gram_residuals(&mu, &targets, cfg.degree)?
        .into_iter()
        .map(|g| ResidualEntry {
            target: g.target,
            degree: g.degree,
            residual: g.residual,
        })
        .collect();
    let max_residual = residuals.iter().map(|r| r.residual).fold(0.0, f64::max);
    let consistent = match verdict.prediction {
        Prediction::Dense => max_residual <= cfg.dense_threshold,
        Prediction::NotDense => max_residual >= cfg.not_dense_threshold,
    };
    let mut rj = Vec::new();
    if verdict.prediction == Prediction::Dense {
        for j in 0..phi.nvars() {
            let r = build_rj(phi, alpha, j, cfg.n_theta)?;
            let ray = rj_ray_bound_check(&r, &mu, &cfg.rhos)?;
            rj.push(RjSummary {
                j: j + 1,
                numerator: r.numerator.to_string(),
                denominator: r.denominator.to_string(),
                validation_pass_rate: r.validation_pass_rate,
                ray,
            });
        }
    }
    Ok(DensityReport {
        alpha,
        prediction: verdict.prediction,
        per_variable: verdict.per_variable,
        residuals,
        rj,
        max_residual,
        consistent,
    })
}
