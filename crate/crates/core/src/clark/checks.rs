use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::coarea::trace_level_set;
use super::fiber::FiberOptions;
use super::measure::{assemble, SampledClarkMeasure};
use super::rif::{torus_grid, DomainKind, RationalInnerFn};
use crate::error::{Error, Result};
use crate::sum::CompensatedSum;
use crate::symmetric::haar_sample;

/// Interior points must satisfy `|z_j| <= MAX_INTERIOR_RADIUS`.
pub const MAX_INTERIOR_RADIUS: f64 = 0.9;

/// Both sides of an identity that should hold up to discretization error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Comparison<T> {
    pub lhs: T,
    pub rhs: T,
}

impl Comparison<f64> {
    pub fn abs_err(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

impl Comparison<Complex64> {
    pub fn abs_err(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }
}

/// Product Poisson kernel of the polydisc.
pub fn poisson_kernel(z: &[Complex64], zeta: &[Complex64]) -> f64 {
    z.iter()
        .zip(zeta)
        .map(|(z, w)| (1.0 - z.norm_sqr()) / (w - z).norm_sqr())
        .product()
}

/// Compares `int P_z dmu_alpha` with `(1 - |phi(z)|^2) / |alpha - phi(z)|^2`.
///
/// On the matrix ball only `z = 0` is supported.
pub fn poisson_check(mu: &SampledClarkMeasure, phi: &RationalInnerFn, z: &[Complex64]) -> Result<Comparison<f64>> {
    if z.len() != phi.nvars() {
        return Err(Error::DimensionMismatch {
            expected: phi.nvars(),
            got: z.len(),
        });
    }
    if mu.domain != phi.domain() {
        return Err(Error::Precondition("measure and function live on different domains".into()));
    }
    let lhs = match phi.domain() {
        DomainKind::Polydisc => {
            if let Some(c) = z.iter().find(|c| c.norm() > MAX_INTERIOR_RADIUS) {
                return Err(Error::Precondition(format!(
                    "interior point has |z_j| = {} > {MAX_INTERIOR_RADIUS}",
                    c.norm()
                )));
            }
            mu.integrate(|zeta| Complex64::new(poisson_kernel(z, zeta), 0.0)).re
        }
        DomainKind::MatrixBall2x2 => {
            if z.iter().any(|c| c.norm() != 0.0) {
                return Err(Error::Unsupported("the matrix-ball Poisson check supports only z = 0".into()));
            }
            mu.total_mass()
        }
    };
    let v = phi.eval(z)?;
    let rhs = (1.0 - v.norm_sqr()) / (mu.alpha - v).norm_sqr();
    Ok(Comparison { lhs, rhs })
}

/// Points of the torus used for the reference integral `int f dbeta`.
const MAX_TORUS_POINTS: usize = 1 << 20;

/// `int f dbeta` over the Shilov boundary: product trapezoid rule on the
/// torus, Haar Monte Carlo on U(2).
pub fn boundary_integral<F>(phi: &RationalInnerFn, f: &F, size: usize, seed: u64) -> Complex64
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    let values: Vec<Complex64> = match phi.domain() {
        DomainKind::Polydisc => {
            let n = phi.nvars();
            let mut m = size.max(2);
            while m.pow(n as u32) > MAX_TORUS_POINTS {
                m /= 2;
            }
            torus_grid(n, m, 0.5).par_iter().map(|z| f(z)).collect()
        }
        DomainKind::MatrixBall2x2 => (0..size as u64)
            .into_par_iter()
            .map(|i| f(&haar_sample(seed, i).to_vec()))
            .collect(),
    };
    let n = values.len() as f64;
    values.into_iter().collect::<CompensatedSum>().value() / n
}

/// Compares the average of `int f dmu_alpha` over `n_alpha` equally spaced
/// `alpha` with `int f dbeta`.
pub fn disintegration_check<F>(
    phi: &RationalInnerFn,
    f: F,
    n_alpha: usize,
    size: usize,
    seed: u64,
    opts: &FiberOptions,
) -> Result<Comparison<Complex64>>
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    if n_alpha == 0 {
        return Err(Error::Precondition("n_alpha must be positive".into()));
    }
    let mut acc = CompensatedSum::default();
    for k in 0..n_alpha {
        let alpha = Complex64::from_polar(1.0, TAU * k as f64 / n_alpha as f64);
        let mu = assemble(phi, alpha, size, seed, opts)?;
        acc.add(mu.integrate(&f));
    }
    let lhs = acc.value() / n_alpha as f64;
    let rhs = boundary_integral(phi, &f, size, seed.wrapping_add(1));
    Ok(Comparison { lhs, rhs })
}

/// Compares `int f dmu_alpha` from fiber atoms with the coarea integral over
/// the traced level set.
pub fn cross_method_check<F>(
    phi: &RationalInnerFn,
    alpha: Complex64,
    f: F,
    grid: usize,
    n_theta: usize,
    seed: u64,
    opts: &FiberOptions,
) -> Result<Comparison<Complex64>>
where
    F: Fn(&[Complex64]) -> Complex64,
{
    let mu = assemble(phi, alpha, grid, seed, opts)?;
    let trace = trace_level_set(phi, alpha, n_theta)?;
    Ok(Comparison {
        lhs: mu.integrate(&f),
        rhs: trace.integrate(&f),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::clark::assemble_polydisc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn poisson_coordinate() {
        let phi = catalog::z1(2);
        let mu = assemble_polydisc(&phi, c(1.0, 0.0), 512, 0, &FiberOptions::default()).unwrap();
        let r = poisson_check(&mu, &phi, &[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12 && (r.rhs - 1.0).abs() < 1e-15);
        let t = 0.6;
        let r = poisson_check(&mu, &phi, &[c(t, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((r.rhs - (1.0 + t) / (1.0 - t)).abs() < 1e-12);
        assert!(r.abs_err() < 1e-4);
    }

    #[test]
    fn poisson_rif() {
        let phi = catalog::rif11();
        let alpha = c(0.0, 1.0);
        let mu = assemble_polydisc(&phi, alpha, 512, 0, &FiberOptions::default()).unwrap();
        let r = poisson_check(&mu, &phi, &[c(0.3, 0.0), c(0.0, -0.2)]).unwrap();
        assert!(r.abs_err() < 1e-3, "{r:?}");
    }

    #[test]
    fn poisson_rejects_outside_points() {
        let phi = catalog::z1(2);
        let mu = assemble_polydisc(&phi, c(1.0, 0.0), 16, 0, &FiberOptions::default()).unwrap();
        assert!(poisson_check(&mu, &phi, &[c(0.95, 0.0), c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn disintegration_examples() {
        let opts = FiberOptions::default();
        let r = disintegration_check(&catalog::z1(2), |z| z[0], 16, 64, 0, &opts).unwrap();
        assert!(r.lhs.norm() < 1e-12 && r.rhs.norm() < 1e-12);
        let r = disintegration_check(&catalog::z1z2(), |z| (z[0] + z[1]).norm_sqr().into(), 64, 64, 0, &opts).unwrap();
        assert!((r.lhs - 2.0).norm() < 1e-2 && (r.rhs - 2.0).norm() < 1e-12, "{r:?}");
    }

    #[test]
    fn cross_method_rif() {
        let r = cross_method_check(&catalog::rif11(), c(1.0, 0.0), |z| z[0], 512, 2048, 0, &FiberOptions::default()).unwrap();
        assert!(r.abs_err() < 1e-3 * (1.0 + r.rhs.norm()), "{r:?}");
    }
}
