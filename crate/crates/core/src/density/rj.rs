use num_complex::Complex64;
use serde::Serialize;

use super::obstruction::{obstruction_detect, Prediction};
use crate::clark::{trace_level_set, RationalInnerFn, SampledClarkMeasure};
use crate::error::{Error, Result};
use crate::poly::{all_roots, MultiPoly, RootOptions, UniPoly, DEFAULT_TOL_CIRCLE, DEFAULT_TOL_RANK};

/// Agreement required between `r_j(zeta)` and `conj(zeta_j)`.
pub const RJ_TOL: f64 = 1e-8;
/// Fraction of traced points that must agree.
pub const RJ_MIN_PASS_RATE: f64 = 0.99;

/// `r_j = (alpha q_2 - p_2) / (p_1 - alpha q_1)` where `p = p_1 + z_j p_2`
/// and `q = q_1 + z_j q_2`. On `V_alpha` it equals `conj(zeta_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RjFunction {
    /// 0-based variable index.
    pub j: usize,
    pub numerator: MultiPoly,
    /// Polynomial in the variables other than `z_j`.
    pub denominator: MultiPoly,
    /// Degree `k` of the denominator.
    pub degree: usize,
    pub alpha: Complex64,
    /// Fraction of traced level-set points with `|r_j - conj(zeta_j)| <= RJ_TOL`.
    pub validation_pass_rate: f64,
    pub validated_points: usize,
}

impl RjFunction {
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        Ok(self.numerator.eval(z)? / self.denominator.eval(z)?)
    }

    /// `r_{j,rho}(zeta) = numerator(zeta) / denominator(rho zeta')`.
    pub fn eval_ray(&self, z: &[Complex64], rho: f64) -> Result<Complex64> {
        let scaled: Vec<Complex64> = z.iter().map(|c| c * rho).collect();
        Ok(self.numerator.eval(z)? / self.denominator.eval(&scaled)?)
    }

    pub fn is_valid(&self) -> bool {
        self.validation_pass_rate >= RJ_MIN_PASS_RATE
    }

    /// Roots of the (univariate) denominator, bivariate case.
    fn denominator_roots(&self) -> Result<Vec<Complex64>> {
        if self.degree == 0 {
            return Ok(Vec::new());
        }
        let other = 1 - self.j;
        all_roots(&self.denominator.to_unipoly_in(other)?, &RootOptions::default())
    }

    /// Distance from the zero set of the denominator to the closed unit disc.
    pub fn zero_free_margin(&self) -> Result<f64> {
        Ok(self
            .denominator_roots()?
            .iter()
            .map(|r| r.norm() - 1.0)
            .fold(f64::INFINITY, f64::min))
    }
}

/// Builds `r_j` for a bivariate RIF predicted dense at `alpha` and validates
/// it against `conj(zeta_j)` on `n_theta` columns of the traced level set.
pub fn build_rj(phi: &RationalInnerFn, alpha: Complex64, j: usize, n_theta: usize) -> Result<RjFunction> {
    if j >= phi.nvars() {
        return Err(Error::VariableOutOfRange {
            index: j,
            nvars: phi.nvars(),
        });
    }
    let verdict = obstruction_detect(phi, alpha, DEFAULT_TOL_RANK, DEFAULT_TOL_CIRCLE)?;
    if verdict.prediction != Prediction::Dense {
        return Err(Error::Precondition(format!(
            "r_{} needs a dense case; V_alpha contains a cylinder",
            j + 1
        )));
    }
    let (p1, p2) = phi.p().split_in_variable(j)?;
    let (q1, q2) = phi.q().split_in_variable(j)?;
    let numerator = &q2.scale(alpha) - &p2;
    let denominator = &p1 - &q1.scale(alpha);
    if denominator.is_zero() {
        return Err(Error::InvalidFunction(format!("denominator of r_{} vanishes identically", j + 1)));
    }
    let mut r = RjFunction {
        j,
        degree: denominator.degree().unwrap_or(0) as usize,
        numerator,
        denominator,
        alpha,
        validation_pass_rate: 0.0,
        validated_points: 0,
    };
    let margin = r.zero_free_margin()?;
    if margin <= 0.0 {
        let witness = r
            .denominator_roots()?
            .into_iter()
            .min_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or_default();
        return Err(Error::Precondition(format!(
            "denominator of r_{} vanishes on the closed disc at {witness}",
            j + 1
        )));
    }

    let trace = trace_level_set(phi, alpha, n_theta)?;
    let passed = trace
        .points
        .iter()
        .filter(|pt| {
            r.eval(&pt.zeta)
                .map(|v| (v - pt.zeta[j].conj()).norm() <= RJ_TOL)
                .unwrap_or(false)
        })
        .count();
    r.validated_points = trace.points.len();
    r.validation_pass_rate = if trace.points.is_empty() {
        0.0
    } else {
        passed as f64 / trace.points.len() as f64
    };
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RayStep {
    pub rho: f64,
    /// Sup over atoms of `|r_{j,rho}| / |r_j|`, computed as
    /// `|den(zeta')| / |den(rho zeta')|`.
    pub max_ratio: f64,
    /// `|| r_{j,rho} - r_j ||` in `L^2(mu_alpha)`.
    pub l2_distance: f64,
    pub within_bound: bool,
    /// Whether `max_ratio <= 2^{-k}` holds as literally stated.
    pub literal_bound_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RayBoundReport {
    pub j: usize,
    pub k: usize,
    /// Distance from the denominator's zeros to the closed unit disc.
    pub epsilon: f64,
    /// `min(epsilon, 1)`, the value fed to the lower bound.
    pub epsilon_used: f64,
    /// `(2 / epsilon_used)^k`.
    pub bound: f64,
    pub literal_bound: f64,
    pub steps: Vec<RayStep>,
    pub bound_holds: bool,
    /// `l2_distance` is nonincreasing along the increasing `rho` list.
    pub monotone_convergence: bool,
}

/// Checks the ray approximants `r_{j,rho}` against `r_j` on the atoms of `mu`.
pub fn rj_ray_bound_check(r: &RjFunction, mu: &SampledClarkMeasure, rhos: &[f64]) -> Result<RayBoundReport> {
    if rhos.iter().any(|&p| !(0.0..1.0).contains(&p)) {
        return Err(Error::Precondition("every rho must lie in [0, 1)".into()));
    }
    let epsilon = r.zero_free_margin()?;
    if epsilon <= 0.0 {
        return Err(Error::Precondition(format!(
            "denominator zeros touch the closed disc (epsilon = {epsilon:.3e})"
        )));
    }
    let epsilon_used = epsilon.min(1.0);
    let k = r.degree;
    let bound = (2.0 / epsilon_used).powi(k as i32);
    let literal_bound = 0.5f64.powi(k as i32);

    let mut sorted = rhos.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut steps = Vec::with_capacity(sorted.len());
    for &rho in &sorted {
        let mut max_ratio: f64 = 0.0;
        let mut sq = 0.0;
        for (w, z) in mu.weighted_atoms() {
            let scaled: Vec<Complex64> = z.iter().map(|c| c * rho).collect();
            let d = r.denominator.eval(z)?;
            let d_rho = r.denominator.eval(&scaled)?;
            max_ratio = max_ratio.max(d.norm() / d_rho.norm());
            let num = r.numerator.eval(z)?;
            sq += w * (num / d_rho - num / d).norm_sqr();
        }
        steps.push(RayStep {
            rho,
            max_ratio,
            l2_distance: sq.max(0.0).sqrt(),
            within_bound: max_ratio <= bound * (1.0 + 1e-12),
            literal_bound_holds: max_ratio <= literal_bound * (1.0 + 1e-12),
        });
    }
    let monotone_convergence = steps
        .windows(2)
        .all(|w| w[1].l2_distance <= w[0].l2_distance * (1.0 + 1e-9) + 1e-15);
    Ok(RayBoundReport {
        j: r.j + 1,
        k,
        epsilon,
        epsilon_used,
        bound,
        literal_bound,
        bound_holds: steps.iter().all(|s| s.within_bound),
        steps,
        monotone_convergence,
    })
}

/// The univariate polynomial `t -> den(t zeta')` along a ray, bivariate case.
pub fn denominator_on_ray(r: &RjFunction, zeta_other: Complex64) -> Result<UniPoly> {
    let other = 1 - r.j;
    let mut z = vec![Complex64::default(); 2];
    z[other] = zeta_other;
    r.denominator.restrict_to_fiber(&z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::clark::{assemble_polydisc, FiberOptions};

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn product_split() {
        let alpha = Complex64::from_polar(1.0, 0.3);
        for j in 0..2 {
            let r = build_rj(&catalog::z1z2(), alpha, j, 256).unwrap();
            assert_eq!(r.degree, 0);
            // r_j = z_other / alpha.
            let z = [Complex64::new(0.2, 0.1), Complex64::new(-0.4, 0.3)];
            assert!((r.eval(&z).unwrap() - z[1 - j] / alpha).norm() < 1e-15);
            assert_eq!(r.validation_pass_rate, 1.0);
        }
    }

    #[test]
    fn rif_r1_is_z2_at_one() {
        let r = build_rj(&catalog::rif11(), one(), 0, 512).unwrap();
        let z = [Complex64::new(0.2, 0.1), Complex64::new(-0.4, 0.3)];
        assert!((r.eval(&z).unwrap() - z[1]).norm() < 1e-15);
        assert!(r.is_valid());
    }

    #[test]
    fn rif_at_i_has_margin() {
        let r = build_rj(&catalog::rif11(), Complex64::i(), 0, 512).unwrap();
        assert_eq!(r.degree, 1);
        assert!((r.zero_free_margin().unwrap() - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!(r.is_valid(), "{}", r.validation_pass_rate);
    }

    #[test]
    fn not_dense_rejected() {
        assert!(build_rj(&catalog::z1(2), one(), 0, 64).is_err());
    }

    #[test]
    fn ray_ratio_constant_denominator() {
        let phi = catalog::z1z2();
        let r = build_rj(&phi, one(), 0, 64).unwrap();
        let mu = assemble_polydisc(&phi, one(), 64, 0, &FiberOptions::default()).unwrap();
        let rep = rj_ray_bound_check(&r, &mu, &[0.9, 0.99, 0.999]).unwrap();
        for s in &rep.steps {
            assert!((s.max_ratio - 1.0).abs() < 1e-15);
            assert!(s.l2_distance < 1e-15);
        }
        assert!(rep.bound_holds && rep.monotone_convergence);
    }

    #[test]
    fn ray_convergence_rif() {
        let phi = catalog::rif11();
        let r = build_rj(&phi, Complex64::i(), 0, 512).unwrap();
        let mu = assemble_polydisc(&phi, Complex64::i(), 512, 0, &FiberOptions::default()).unwrap();
        let rep = rj_ray_bound_check(&r, &mu, &[0.999, 0.9, 0.99]).unwrap();
        assert!(rep.bound_holds);
        assert!(rep.monotone_convergence);
        assert!(rep.steps[0].l2_distance > rep.steps[2].l2_distance);
        assert_eq!(rep.steps[0].rho, 0.9);
    }
}
