use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::commands::{interior_points, poisson_checks, test_functions};
use super::report::Check;
use crate::catalog;
use crate::clark::{assemble_polydisc, cross_method_check, disintegration_check, FiberOptions, RationalInnerFn};
use crate::density::{
    analyze_density, build_rj, lemma_lower_bound_test, obstruction_detect, random_admissible_instance,
    rj_ray_bound_check, DensityConfig, Prediction, RJ_MIN_PASS_RATE,
};
use crate::error::Result;
use crate::poly::{DEFAULT_TOL_CIRCLE, DEFAULT_TOL_RANK};
use crate::symmetric::{run_demo, DemoConfig, DENSE_MAX, FAMILY_TOL, JACOBIAN_REL_TOL, NOT_DENSE_MIN};

pub const GRID: usize = 512;
pub const N_THETA: usize = 2048;
pub const N_ALPHA: usize = 64;
pub const LEMMA_INSTANCES: usize = 100;
pub const LEMMA_MAX_DEGREE: usize = 5;
pub const LEMMA_GRID: usize = 10_000;

#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub id: u32,
    pub name: String,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Criterion {
    fn new(id: u32, name: &str, checks: Vec<Check>) -> Self {
        Self {
            id,
            name: name.into(),
            pass: !checks.is_empty() && checks.iter().all(|c| c.pass),
            checks,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionSummary {
    pub id: u32,
    pub name: String,
    pub checks: usize,
    pub failed: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfTest {
    pub criteria: Vec<Criterion>,
}

impl SelfTest {
    pub fn summary(&self) -> Vec<CriterionSummary> {
        self.criteria
            .iter()
            .map(|c| CriterionSummary {
                id: c.id,
                name: c.name.clone(),
                checks: c.checks.len(),
                failed: c.failures().count(),
                pass: c.pass,
            })
            .collect()
    }
}

/// Test functions on the bidisc: `z1`, `z1 z2` and the degree-(1,1) RIF.
pub fn bidisc_functions() -> Vec<(&'static str, RationalInnerFn)> {
    vec![("z1", catalog::z1(2)), ("z1z2", catalog::z1z2()), ("rif11", catalog::rif11())]
}

fn alpha_set() -> Vec<(&'static str, Complex64)> {
    vec![
        ("1", Complex64::new(1.0, 0.0)),
        ("i", Complex64::i()),
        ("exp(0.7i)", Complex64::from_polar(1.0, 0.7)),
    ]
}

fn corpus_alphas() -> [(&'static str, Complex64); 2] {
    [("1", Complex64::new(1.0, 0.0)), ("i", Complex64::i())]
}

pub fn poisson_reproduction(seed: u64) -> Result<Criterion> {
    let opts = FiberOptions::default();
    let points = interior_points(2);
    let mut checks = Vec::new();
    for (name, phi) in bidisc_functions() {
        for (_, alpha) in alpha_set() {
            let mu = assemble_polydisc(&phi, alpha, GRID, seed, &opts)?;
            for mut c in poisson_checks(&phi, &mu, &points)? {
                c.name = format!("{name} {}", c.name);
                checks.push(c);
            }
        }
    }
    Ok(Criterion::new(1, "Poisson reproduction", checks))
}

pub fn cross_method(seed: u64) -> Result<Criterion> {
    let opts = FiberOptions::default();
    let mut checks = Vec::new();
    for (name, phi) in bidisc_functions() {
        for (a, alpha) in alpha_set() {
            for (fname, f) in test_functions(&phi) {
                let r = cross_method_check(&phi, alpha, f, GRID, N_THETA, seed, &opts)?;
                checks.push(Check::compare(
                    format!("{name} alpha={a} f={fname}"),
                    r.lhs,
                    r.rhs,
                    1e-3 * r.rhs.norm().max(1.0),
                ));
            }
        }
    }
    Ok(Criterion::new(2, "fiber vs coarea", checks))
}

pub fn disintegration(seed: u64) -> Result<Criterion> {
    let opts = FiberOptions::default();
    let mut checks = Vec::new();
    for (name, phi) in bidisc_functions() {
        for (fname, f) in test_functions(&phi) {
            let r = disintegration_check(&phi, f, N_ALPHA, GRID, seed, &opts)?;
            checks.push(Check::compare(format!("{name} f={fname}"), r.lhs, r.rhs, 1e-2));
        }
    }
    Ok(Criterion::new(3, "Aleksandrov disintegration", checks))
}

fn density_config(seed: u64) -> DensityConfig {
    DensityConfig {
        grid: GRID,
        n_theta: N_THETA,
        seed,
        ..DensityConfig::default()
    }
}

pub fn decision_consistency(seed: u64) -> Result<Criterion> {
    let cfg = density_config(seed);
    let mut checks = Vec::new();
    for (name, phi) in catalog::density_corpus() {
        for (a, alpha) in corpus_alphas() {
            let r = analyze_density(&phi, alpha, &cfg)?;
            let tol = match r.prediction {
                Prediction::Dense => cfg.dense_threshold,
                Prediction::NotDense => cfg.not_dense_threshold,
            };
            checks.push(Check::flag(
                format!("{name} alpha={a} prediction={}", r.prediction),
                r.max_residual,
                tol,
                r.consistent,
            ));
        }
    }
    Ok(Criterion::new(4, "density decision consistency", checks))
}

pub fn rj_construction(seed: u64) -> Result<Criterion> {
    let cfg = density_config(seed);
    let opts = FiberOptions::default();
    let mut checks = Vec::new();
    for (name, phi) in catalog::density_corpus() {
        for (a, alpha) in corpus_alphas() {
            let v = obstruction_detect(&phi, alpha, DEFAULT_TOL_RANK, DEFAULT_TOL_CIRCLE)?;
            if v.prediction != Prediction::Dense {
                continue;
            }
            let mu = assemble_polydisc(&phi, alpha, cfg.grid, seed, &opts)?;
            for j in 0..phi.nvars() {
                let r = build_rj(&phi, alpha, j, cfg.n_theta)?;
                checks.push(Check::flag(
                    format!("{name} alpha={a} r_{} validation", j + 1),
                    r.validation_pass_rate,
                    RJ_MIN_PASS_RATE,
                    r.validation_pass_rate >= RJ_MIN_PASS_RATE,
                ));
                let ray = rj_ray_bound_check(&r, &mu, &cfg.rhos)?;
                let last = ray.steps.last().map_or(0.0, |s| s.l2_distance);
                checks.push(Check::flag(
                    format!("{name} alpha={a} r_{} ray convergence", j + 1),
                    last,
                    0.0,
                    ray.monotone_convergence,
                ));
            }
        }
    }
    Ok(Criterion::new(5, "r_j construction", checks))
}

pub fn lemma_suite(seed: u64) -> Result<Criterion> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    for i in 0..LEMMA_INSTANCES {
        let (p, eps) = random_admissible_instance(&mut rng, LEMMA_MAX_DEGREE);
        let o = lemma_lower_bound_test(&p, eps, LEMMA_GRID)?;
        checks.push(Check::flag(
            format!("instance {i} k={} eps={eps:.4}", p.degree().unwrap_or(0)),
            o.min_ratio,
            o.bound,
            o.holds,
        ));
    }
    Ok(Criterion::new(6, "polynomial lower bound", checks))
}

pub fn matrix_ball_example(seed: u64) -> Result<Criterion> {
    let cfg = DemoConfig {
        seed,
        ..DemoConfig::default()
    };
    let r = run_demo(&cfg)?;
    let min_i22 = r.density.phi_i22_residuals.iter().copied().fold(f64::INFINITY, f64::min);
    let max_det = r.density.det_residuals.iter().copied().fold(0.0, f64::max);
    let checks = vec![
        Check::flag("innerness violations", r.innerness.violations as f64, 0.0, r.innerness.pass),
        Check::flag(
            "torus family residual",
            r.torus_family.max_residuals.max(),
            FAMILY_TOL,
            r.torus_family.pass,
        ),
        Check::flag("jacobian relative error", r.jacobian.max_rel_err, JACOBIAN_REL_TOL, r.jacobian.pass),
        Check::flag("phi_i22 conjugate-entry residual", min_i22, NOT_DENSE_MIN, min_i22 >= NOT_DENSE_MIN),
        Check::flag("det conjugate-entry residual", max_det, DENSE_MAX, max_det <= DENSE_MAX),
    ];
    Ok(Criterion::new(7, "matrix ball example", checks))
}

pub type CriterionFn = fn(u64) -> Result<Criterion>;

/// The criteria in order.
pub const CRITERIA: [CriterionFn; 7] = [
    poisson_reproduction,
    cross_method,
    disintegration,
    decision_consistency,
    rj_construction,
    lemma_suite,
    matrix_ball_example,
];

pub fn run_selftest(seed: u64) -> Result<SelfTest> {
    let criteria = CRITERIA.iter().map(|f| f(seed)).collect::<Result<Vec<_>>>()?;
    Ok(SelfTest { criteria })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_suite_passes() {
        let c = lemma_suite(0).unwrap();
        assert_eq!(c.checks.len(), LEMMA_INSTANCES);
        assert!(c.pass);
    }

    #[test]
    fn empty_criterion_fails() {
        assert!(!Criterion::new(9, "empty", vec![]).pass);
    }
}
