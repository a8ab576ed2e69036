use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::family::{jacobian_closed_form, jacobian_rank_check, phi_i22, torus_family, FamilyResiduals};
use super::haar_sample;
use crate::catalog;
use crate::clark::{assemble_matrix_ball, FiberOptions, SampledClarkMeasure};
use crate::density::{gram_residuals, Target};
use crate::error::{Error, Result};

/// `conj(M) = adj(M)^T / det(M)` on U(2); with `det = alpha` each conjugate
/// entry is a holomorphic linear function.
pub fn adjugate_prediction(a: Complex64, b: Complex64, c: Complex64, d: Complex64, alpha: Complex64) -> [Complex64; 4] {
    [d / alpha, -c / alpha, -b / alpha, a / alpha]
}

/// Max over atoms of `|conj(entry) - prediction|`, per entry.
pub fn adjugate_identity_probe(mu: &SampledClarkMeasure) -> [f64; 4] {
    let mut worst = [0.0f64; 4];
    for f in &mu.fibers {
        for atom in &f.fiber.atoms {
            let z = &atom.point;
            let pred = adjugate_prediction(z[0], z[1], z[2], z[3], mu.alpha);
            for k in 0..4 {
                worst[k] = worst[k].max((z[k].conj() - pred[k]).norm());
            }
        }
    }
    worst
}

#[derive(Clone, Debug, Serialize)]
pub struct DemoConfig {
    pub alpha: Complex64,
    pub seed: u64,
    /// Haar samples for the innerness sweep.
    pub innerness_samples: usize,
    /// Haar samples for the Clark measures.
    pub samples: usize,
    pub x1: Vec<Complex64>,
    pub n_gamma: usize,
    pub jacobian_points: usize,
    #[serde(rename = "N")]
    pub degree: u32,
}

impl Default for DemoConfig {
    fn default() -> Self {
        Self {
            alpha: Complex64::i(),
            seed: 0,
            innerness_samples: 100_000,
            samples: 10_000,
            x1: (0..10).map(|k| Complex64::from_polar(0.09 * k as f64, 0.7 * k as f64)).collect(),
            n_gamma: 64,
            jacobian_points: 100,
            degree: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InnernessSummary {
    pub n: usize,
    pub violations: usize,
    /// Samples dropped because `|1 - a| <= 1e-3`.
    pub near_pole: usize,
    pub max_deviation: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusSummary {
    pub x1: Vec<Complex64>,
    pub alpha: Complex64,
    pub n_gamma: usize,
    pub max_residuals: FamilyResiduals,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobianSummary {
    pub points: usize,
    pub max_rel_err: f64,
    pub min_abs_closed_form: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensitySummary {
    pub samples: usize,
    /// Residuals of `conj(a), ..., conj(d)` for `phi_i22` at degree N.
    pub phi_i22_residuals: Vec<f64>,
    /// Residuals of `conj(a), ..., conj(d)` for `det` at degree 1.
    pub det_residuals: Vec<f64>,
    /// Pointwise adjugate identity on the atoms of the `det` measure.
    pub det_adjugate_max: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DemoReport {
    pub innerness: InnernessSummary,
    pub torus_family: TorusSummary,
    pub jacobian: JacobianSummary,
    pub density: DensitySummary,
}

impl DemoReport {
    pub fn pass(&self) -> bool {
        self.innerness.pass && self.torus_family.pass && self.jacobian.pass && self.density.pass
    }
}

pub const INNER_TOL: f64 = 1e-6;
pub const POLE_EXCLUSION: f64 = 1e-3;
pub const FAMILY_TOL: f64 = 1e-10;
pub const JACOBIAN_REL_TOL: f64 = 1e-5;
/// Points whose closed-form determinant is smaller than this are not used.
pub const JACOBIAN_MIN_DET: f64 = 1e-3;
pub const NOT_DENSE_MIN: f64 = 0.1;
pub const DENSE_MAX: f64 = 1e-2;

/// Residual allowed for the `det` fits: `DENSE_MAX` from 10^4 samples on,
/// `3 / sqrt(N)` below that.
pub fn dense_tolerance(samples: usize) -> f64 {
    if samples >= 10_000 {
        DENSE_MAX
    } else {
        3.0 / (samples as f64).sqrt()
    }
}

/// Counts Haar samples off the pole set where `|phi_i22|` is not 1.
pub fn innerness_sweep(n: usize, seed: u64) -> InnernessSummary {
    let (violations, near_pole, max_deviation) = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let m = haar_sample(seed, i);
            if (Complex64::new(1.0, 0.0) - m.a).norm() <= POLE_EXCLUSION {
                return (0, 1, 0.0);
            }
            let dev = phi_i22(&m).map(|v| (v.norm() - 1.0).abs()).unwrap_or(f64::INFINITY);
            (usize::from(dev > INNER_TOL), 0, dev)
        })
        .reduce(|| (0, 0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1, a.2.max(b.2)));
    InnernessSummary {
        n,
        violations,
        near_pole,
        max_deviation,
        pass: violations == 0,
    }
}

/// Random `(rho, theta, t)` with a closed-form Jacobian of at least
/// `JACOBIAN_MIN_DET` in size.
pub fn jacobian_sweep(points: usize, alpha: Complex64, seed: u64) -> Result<JacobianSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_rel_err: f64 = 0.0;
    let mut min_abs: f64 = f64::INFINITY;
    let mut used = 0;
    while used < points {
        let rho = rng.random_range(0.05..0.95);
        let theta = rng.random_range(0.0..TAU);
        let t = rng.random_range(0.0..TAU);
        if jacobian_closed_form(rho, theta, t, alpha).abs() < JACOBIAN_MIN_DET {
            continue;
        }
        let j = jacobian_rank_check(rho, theta, t, alpha)?;
        max_rel_err = max_rel_err.max(j.rel_err());
        min_abs = min_abs.min(j.closed_form.abs());
        used += 1;
    }
    Ok(JacobianSummary {
        points,
        max_rel_err,
        min_abs_closed_form: min_abs,
        pass: max_rel_err <= JACOBIAN_REL_TOL,
    })
}

/// Runs the full matrix-ball demonstration.
pub fn run_demo(cfg: &DemoConfig) -> Result<DemoReport> {
    if let Some(x) = cfg.x1.iter().find(|x| x.norm() >= 1.0) {
        return Err(Error::Config(format!("x1 = {x} must satisfy |x1| < 1")));
    }
    let innerness = innerness_sweep(cfg.innerness_samples, cfg.seed);

    let mut max_residuals = FamilyResiduals::default();
    for &x1 in &cfg.x1 {
        max_residuals.merge(&torus_family(x1, cfg.alpha, cfg.n_gamma)?.residuals);
    }
    let torus_family = TorusSummary {
        x1: cfg.x1.clone(),
        alpha: cfg.alpha,
        n_gamma: cfg.n_gamma,
        pass: max_residuals.max() <= FAMILY_TOL,
        max_residuals,
    };

    let jacobian = jacobian_sweep(cfg.jacobian_points, cfg.alpha, cfg.seed.wrapping_add(1))?;

    let opts = FiberOptions::default();
    let targets: Vec<Target> = (0..4).map(Target::conj).collect();
    let mu_i22 = assemble_matrix_ball(&catalog::phi_i22(), cfg.alpha, cfg.samples, cfg.seed, &opts)?;
    let phi_i22_residuals: Vec<f64> = gram_residuals(&mu_i22, &targets, cfg.degree)?
        .into_iter()
        .map(|g| g.residual)
        .collect();
    let mu_det = assemble_matrix_ball(&catalog::det_2x2(), cfg.alpha, cfg.samples, cfg.seed, &opts)?;
    let det_residuals: Vec<f64> = gram_residuals(&mu_det, &targets, 1)?
        .into_iter()
        .map(|g| g.residual)
        .collect();
    let det_adjugate_max = adjugate_identity_probe(&mu_det).into_iter().fold(0.0, f64::max);
    let density = DensitySummary {
        samples: cfg.samples,
        pass: phi_i22_residuals.iter().all(|&r| r >= NOT_DENSE_MIN)
            && det_residuals.iter().all(|&r| r <= dense_tolerance(cfg.samples))
            && det_adjugate_max <= 1e-8,
        phi_i22_residuals,
        det_residuals,
        det_adjugate_max,
    };

    Ok(DemoReport {
        innerness,
        torus_family,
        jacobian,
        density,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjugate_holds_pointwise() {
        for alpha in [Complex64::new(1.0, 0.0), Complex64::i()] {
            let mu = assemble_matrix_ball(&catalog::det_2x2(), alpha, 1000, 3, &FiberOptions::default()).unwrap();
            for r in adjugate_identity_probe(&mu) {
                assert!(r <= 1e-8, "{r}");
            }
        }
    }

    #[test]
    fn small_innerness_sweep() {
        let s = innerness_sweep(5000, 1);
        assert_eq!(s.violations, 0);
        assert!(s.max_deviation < 1e-10);
    }

    #[test]
    fn jacobian_sweep_agrees() {
        let s = jacobian_sweep(100, Complex64::from_polar(1.0, 0.4), 2).unwrap();
        assert!(s.pass, "{s:?}");
    }

    #[test]
    fn rejects_bad_x1() {
        let cfg = DemoConfig {
            x1: vec![Complex64::new(1.0, 0.0)],
            ..DemoConfig::default()
        };
        assert!(matches!(run_demo(&cfg), Err(Error::Config(_))));
    }
}
