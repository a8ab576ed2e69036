use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::json;

use super::config::RunConfig;
use super::report::{complex_value, Check, Report};
use crate::clark::{
    assemble, cross_method_check, disintegration_check, poisson_check, DomainKind, FiberOptions, RationalInnerFn,
};
use crate::density::{analyze_density, DensityConfig, Prediction};
use crate::error::{Error, Result};
use crate::symmetric::{dense_tolerance, run_demo, DemoConfig, FAMILY_TOL, JACOBIAN_REL_TOL, NOT_DENSE_MIN};

pub type TestFn = Box<dyn Fn(&[Complex64]) -> Complex64 + Sync>;

/// `1, z1, z1 zk, |z1 + zk|^2` with `k` the second coordinate on the
/// polydisc and the entry `d` on the matrix ball.
pub fn test_functions(phi: &RationalInnerFn) -> Vec<(String, TestFn)> {
    let (k, name) = match phi.domain() {
        DomainKind::Polydisc => (1, "z2"),
        DomainKind::MatrixBall2x2 => (3, "d"),
    };
    let first = match phi.domain() {
        DomainKind::Polydisc => "z1",
        DomainKind::MatrixBall2x2 => "a",
    };
    let mut out: Vec<(String, TestFn)> = vec![
        ("1".into(), Box::new(|_| Complex64::new(1.0, 0.0))),
        (first.into(), Box::new(|z| z[0])),
    ];
    if phi.nvars() > k {
        out.push((format!("{first}*{name}"), Box::new(move |z| z[0] * z[k])));
        out.push((format!("|{first}+{name}|^2"), Box::new(move |z| (z[0] + z[k]).norm_sqr().into())));
    }
    out
}

/// Five interior points with every coordinate of modulus at most 0.5.
pub fn interior_points(n: usize) -> Vec<Vec<Complex64>> {
    let c = Complex64::new;
    let base = [
        [c(0.0, 0.0), c(0.0, 0.0)],
        [c(0.3, 0.0), c(0.0, -0.2)],
        [c(0.5, 0.0), c(0.0, 0.0)],
        [c(-0.25, 0.25), c(0.4, 0.0)],
        [c(0.0, 0.1), c(-0.3, -0.35)],
    ];
    base.iter()
        .map(|p| (0..n).map(|j| p[j % 2] * if j >= 2 { 0.5 } else { 1.0 }).collect())
        .collect()
}

fn size_for(phi: &RationalInnerFn, cfg: &RunConfig) -> usize {
    match phi.domain() {
        DomainKind::Polydisc => cfg.grid,
        DomainKind::MatrixBall2x2 => cfg.samples,
    }
}

fn fiber_options(cfg: &RunConfig) -> FiberOptions {
    FiberOptions {
        tol_circle: cfg.tol_circle,
        ..FiberOptions::default()
    }
}

/// Sampling tolerance: 1e-3 on the polydisc grid, `3 / sqrt(N)` for Haar
/// Monte Carlo.
fn mass_tolerance(phi: &RationalInnerFn, size: usize) -> f64 {
    match phi.domain() {
        DomainKind::Polydisc => 1e-3,
        DomainKind::MatrixBall2x2 => 3.0 / (size as f64).sqrt(),
    }
}

fn alpha_label(a: Complex64) -> String {
    format!("{:.6}{:+.6}i", a.re, a.im)
}

fn sidecar(out: &Path, tag: &str, ext: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
    out.with_file_name(format!("{stem}{tag}.{ext}"))
}

pub fn poisson_checks(
    phi: &RationalInnerFn,
    mu: &crate::clark::SampledClarkMeasure,
    points: &[Vec<Complex64>],
) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for z in points {
        let r = poisson_check(mu, phi, z)?;
        let tol = match phi.domain() {
            DomainKind::Polydisc => 1e-3 * (1.0 + r.rhs),
            DomainKind::MatrixBall2x2 => mass_tolerance(phi, mu.metadata.total_fibers),
        };
        let zs: Vec<String> = z.iter().map(|c| alpha_label(*c)).collect();
        checks.push(Check::compare(
            format!("poisson alpha={} z=({})", alpha_label(mu.alpha), zs.join(", ")),
            r.lhs.into(),
            r.rhs.into(),
            tol,
        ));
    }
    Ok(checks)
}

pub fn disintegration_checks(phi: &RationalInnerFn, n_alpha: usize, size: usize, seed: u64, opts: &FiberOptions) -> Result<Vec<Check>> {
    let tol = match phi.domain() {
        DomainKind::Polydisc => 1e-2,
        DomainKind::MatrixBall2x2 => 5.0 / (size as f64).sqrt(),
    };
    let mut checks = Vec::new();
    for (name, f) in test_functions(phi) {
        let r = disintegration_check(phi, f, n_alpha, size, seed, opts)?;
        checks.push(Check::compare(format!("disintegration f={name} n_alpha={n_alpha}"), r.lhs, r.rhs, tol));
    }
    Ok(checks)
}

/// Fiber vs coarea integrals; `Ok(None)` when the level set cannot be traced.
pub fn cross_method_checks(
    phi: &RationalInnerFn,
    alpha: Complex64,
    grid: usize,
    n_theta: usize,
    seed: u64,
    opts: &FiberOptions,
) -> Result<Option<Vec<Check>>> {
    if phi.domain() != DomainKind::Polydisc || phi.nvars() != 2 {
        return Ok(None);
    }
    let mut checks = Vec::new();
    for (name, f) in test_functions(phi) {
        match cross_method_check(phi, alpha, f, grid, n_theta, seed, opts) {
            Ok(r) => checks.push(Check::compare(
                format!("fiber vs coarea alpha={} f={name}", alpha_label(alpha)),
                r.lhs,
                r.rhs,
                1e-3 * (1.0 + r.rhs.norm()),
            )),
            Err(Error::Unsupported(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(checks))
}

pub fn cmd_compute(cfg: &RunConfig) -> Result<Report> {
    let phi = cfg.phi()?;
    let size = size_for(&phi, cfg);
    let opts = fiber_options(cfg);
    let zero = vec![Complex64::default(); phi.nvars()];
    let phi0 = phi.eval(&zero)?;
    let mut results = Vec::new();
    let mut checks = Vec::new();
    for (k, &alpha) in cfg.alphas.iter().enumerate() {
        let mu = assemble(&phi, alpha, size, cfg.seed, &opts)?;
        let expected = (1.0 - phi0.norm_sqr()) / (alpha - phi0).norm_sqr();
        let mass = mu.total_mass();
        checks.push(Check::compare(
            format!("mass identity alpha={}", alpha_label(alpha)),
            mass.into(),
            expected.into(),
            mass_tolerance(&phi, size),
        ));
        let mut sidecars = Vec::new();
        if let Some(out) = &cfg.out {
            let tag = if cfg.alphas.len() > 1 { format!(".alpha{k}") } else { String::new() };
            let mpath = sidecar(out, &format!("{tag}.measure"), "json");
            std::fs::write(&mpath, serde_json::to_string(&mu.to_json())?)?;
            let apath = sidecar(out, &format!("{tag}.atoms"), "csv");
            mu.write_atoms_csv(std::fs::File::create(&apath)?)?;
            sidecars.push(mpath.display().to_string());
            sidecars.push(apath.display().to_string());
        }
        results.push(json!({
            "alpha": complex_value(alpha),
            "domain": phi.domain(),
            "total_fibers": mu.metadata.total_fibers,
            "skipped_fibers": mu.metadata.skipped_fibers,
            "atoms": mu.atom_count(),
            "mass": mass,
            "expected_mass": expected,
            "sidecars": sidecars,
        }));
    }
    Ok(Report::new(cfg, json!({ "measures": results }), checks))
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Report> {
    let phi = cfg.phi()?;
    let size = size_for(&phi, cfg);
    let opts = fiber_options(cfg);
    let mut checks = Vec::new();
    let points = match phi.domain() {
        DomainKind::Polydisc => interior_points(phi.nvars()),
        DomainKind::MatrixBall2x2 => vec![vec![Complex64::default(); 4]],
    };
    let mut notes = Vec::new();
    for &alpha in &cfg.alphas {
        let mu = assemble(&phi, alpha, size, cfg.seed, &opts)?;
        checks.extend(poisson_checks(&phi, &mu, &points)?);
        match cross_method_checks(&phi, alpha, cfg.grid, cfg.n_theta, cfg.seed, &opts)? {
            Some(c) => checks.extend(c),
            None => notes.push(format!("fiber vs coarea skipped at alpha={}", alpha_label(alpha))),
        }
    }
    checks.extend(disintegration_checks(&phi, cfg.n_alpha, size, cfg.seed, &opts)?);
    let trace_path = match (&cfg.out, phi.domain() == DomainKind::Polydisc && phi.nvars() == 2) {
        (Some(out), true) => match crate::clark::trace_level_set(&phi, cfg.alphas[0], cfg.n_theta) {
            Ok(t) => {
                let path = sidecar(out, ".trace", "csv");
                t.write_csv(std::fs::File::create(&path)?)?;
                Some(path.display().to_string())
            }
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e),
        },
        _ => None,
    };
    Ok(Report::new(cfg, json!({ "notes": notes, "trace_csv": trace_path }), checks))
}

pub fn cmd_density(cfg: &RunConfig) -> Result<Report> {
    let phi = cfg.phi()?;
    if phi.domain() != DomainKind::Polydisc || phi.nvars() != 2 {
        return Err(Error::Unsupported("the density command handles bivariate polydisc functions".into()));
    }
    let dcfg = DensityConfig {
        grid: cfg.grid,
        n_theta: cfg.n_theta,
        degree: cfg.degree,
        seed: cfg.seed,
        tol_rank: cfg.tol_rank,
        tol_circle: cfg.tol_circle,
        ..DensityConfig::default()
    };
    let mut reports = Vec::new();
    let mut checks = Vec::new();
    for &alpha in &cfg.alphas {
        let r = analyze_density(&phi, alpha, &dcfg)?;
        let a = alpha_label(alpha);
        let tol = match r.prediction {
            Prediction::Dense => dcfg.dense_threshold,
            Prediction::NotDense => dcfg.not_dense_threshold,
        };
        checks.push(Check::flag(
            format!("residual dichotomy alpha={a} prediction={}", r.prediction),
            r.max_residual,
            tol,
            r.consistent,
        ));
        for s in &r.rj {
            checks.push(Check::flag(
                format!("r_{} validation alpha={a}", s.j),
                s.validation_pass_rate,
                crate::density::RJ_MIN_PASS_RATE,
                s.validation_pass_rate >= crate::density::RJ_MIN_PASS_RATE,
            ));
            let last = s.ray.steps.last().map_or(0.0, |x| x.l2_distance);
            checks.push(Check::flag(
                format!("r_{} ray convergence alpha={a}", s.j),
                last,
                0.0,
                s.ray.monotone_convergence && s.ray.bound_holds,
            ));
        }
        reports.push(r);
    }
    Ok(Report::new(cfg, serde_json::to_value(&reports)?, checks))
}

pub fn cmd_demo(cfg: &RunConfig) -> Result<Report> {
    if cfg.alphas.len() != 1 {
        return Err(Error::Config("demo-i22 takes a single alpha".into()));
    }
    let dcfg = DemoConfig {
        alpha: cfg.alphas[0],
        seed: cfg.seed,
        innerness_samples: 10 * cfg.samples,
        samples: cfg.samples,
        x1: cfg.x1.clone(),
        degree: cfg.degree,
        ..DemoConfig::default()
    };
    let r = run_demo(&dcfg)?;
    let checks = vec![
        Check::flag("innerness violations", r.innerness.violations as f64, 0.0, r.innerness.pass),
        Check::flag(
            "torus family residual",
            r.torus_family.max_residuals.max(),
            FAMILY_TOL,
            r.torus_family.pass,
        ),
        Check::flag("jacobian relative error", r.jacobian.max_rel_err, JACOBIAN_REL_TOL, r.jacobian.pass),
        Check::flag(
            "phi_i22 min conjugate-entry residual",
            r.density.phi_i22_residuals.iter().copied().fold(f64::INFINITY, f64::min),
            NOT_DENSE_MIN,
            r.density.phi_i22_residuals.iter().all(|&x| x >= NOT_DENSE_MIN),
        ),
        Check::flag(
            "det max conjugate-entry residual",
            r.density.det_residuals.iter().copied().fold(0.0, f64::max),
            dense_tolerance(cfg.samples),
            r.density.det_residuals.iter().all(|&x| x <= dense_tolerance(cfg.samples)),
        ),
        Check::flag(
            "det adjugate identity",
            r.density.det_adjugate_max,
            1e-8,
            r.density.det_adjugate_max <= 1e-8,
        ),
    ];
    Ok(Report::new(cfg, serde_json::to_value(&r)?, checks))
}

/// Runs every command's checks on fixed inputs and groups them by
/// acceptance criterion.
pub fn cmd_selftest(cfg: &RunConfig) -> Result<Report> {
    let st = super::selftest::run_selftest(cfg.seed)?;
    let results = serde_json::to_value(st.summary())?;
    let checks = st.criteria.into_iter().flat_map(|c| c.checks).collect();
    Ok(Report::new(cfg, results, checks))
}
