use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::MatrixPoint;
use crate::error::{Error, Result};

/// `(ad - bc - d) / (1 - a)`.
pub fn phi_i22(m: &MatrixPoint) -> Result<Complex64> {
    let q = Complex64::new(1.0, 0.0) - m.a;
    if q.norm() < 1e-12 {
        return Err(Error::Precondition(format!("phi_i22 has a pole at a = {}", m.a)));
    }
    Ok((m.det() - m.d) / q)
}

/// `p - alpha q` for `phi_i22`, whose zero set on U(2) is `V_alpha`.
pub fn level_residual(m: &MatrixPoint, alpha: Complex64) -> f64 {
    (m.det() - m.d - alpha * (Complex64::new(1.0, 0.0) - m.a)).norm()
}

/// The closed-form member of the torus family with determinant `gamma`:
///
/// ```text
/// [[|x1|^2 (1 + a' g) - a' g,      x1 x2 (1 + a' g)],
///  [-conj(x1) x2 (alpha + g),      |x1|^2 (g + alpha) - alpha]]
/// ```
///
/// with `a' = conj(alpha)` and `x2 = sqrt(1 - |x1|^2)`.
pub fn family_matrix(x1: Complex64, alpha: Complex64, gamma: Complex64) -> MatrixPoint {
    let one = Complex64::new(1.0, 0.0);
    let r2 = x1.norm_sqr();
    let x2 = (1.0 - r2).sqrt();
    let ag = alpha.conj() * gamma;
    MatrixPoint::new(
        (one + ag) * r2 - ag,
        x1 * x2 * (one + ag),
        -x1.conj() * x2 * (alpha + gamma),
        (gamma + alpha) * r2 - alpha,
    )
}

/// The same matrix as the product
/// `[[y1, -g conj(y2)], [y2, g conj(y1)]] [[conj(x1), conj(x2)], [-x2, x1]]`
/// with `y1 = x1`, `y2 = -alpha x2`.
pub fn family_matrix_product(x1: Complex64, alpha: Complex64, gamma: Complex64) -> MatrixPoint {
    let x2 = Complex64::new((1.0 - x1.norm_sqr()).sqrt(), 0.0);
    let (y1, y2) = (x1, -alpha * x2);
    let left = MatrixPoint::new(y1, -gamma * y2.conj(), y2, gamma * y1.conj());
    let right = MatrixPoint::new(x1.conj(), x2.conj(), -x2, x1);
    left.mul(&right)
}

/// The two scalar conditions that put the product form on `V_alpha`.
pub fn family_conditions(x1: Complex64, alpha: Complex64) -> [Complex64; 2] {
    let one = Complex64::new(1.0, 0.0);
    let x2 = Complex64::new((1.0 - x1.norm_sqr()).sqrt(), 0.0);
    let (y1, y2) = (x1, -alpha * x2);
    [
        one - x1 * y1.conj() + alpha * x2 * y2.conj(),
        x2.conj() * y2 + alpha - alpha * x1.conj() * y1,
    ]
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct FamilyResiduals {
    pub unitarity: f64,
    pub determinant: f64,
    pub level_set: f64,
    pub product_form: f64,
    pub conditions: f64,
}

impl FamilyResiduals {
    pub fn max(&self) -> f64 {
        [self.unitarity, self.determinant, self.level_set, self.product_form, self.conditions]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn merge(&mut self, o: &Self) {
        self.unitarity = self.unitarity.max(o.unitarity);
        self.determinant = self.determinant.max(o.determinant);
        self.level_set = self.level_set.max(o.level_set);
        self.product_form = self.product_form.max(o.product_form);
        self.conditions = self.conditions.max(o.conditions);
    }
}

/// A one-parameter torus of unitaries inside `V_alpha`, indexed by the
/// determinant `gamma`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusFamily {
    pub x1: Complex64,
    pub alpha: Complex64,
    pub gammas: Vec<Complex64>,
    pub matrices: Vec<MatrixPoint>,
    pub residuals: FamilyResiduals,
}

pub fn torus_family(x1: Complex64, alpha: Complex64, n_gamma: usize) -> Result<TorusFamily> {
    if x1.norm() >= 1.0 {
        return Err(Error::Precondition(format!("|x1| = {} must be below 1", x1.norm())));
    }
    if (alpha.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!("|alpha| = {} is not 1", alpha.norm())));
    }
    if n_gamma == 0 {
        return Err(Error::Precondition("n_gamma must be positive".into()));
    }
    let gammas: Vec<Complex64> = (0..n_gamma)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n_gamma as f64))
        .collect();
    let cond = family_conditions(x1, alpha);
    let mut residuals = FamilyResiduals::default();
    let matrices: Vec<MatrixPoint> = gammas
        .iter()
        .map(|&g| {
            let m = family_matrix(x1, alpha, g);
            let prod = family_matrix_product(x1, alpha, g);
            let diff = [m.a - prod.a, m.b - prod.b, m.c - prod.c, m.d - prod.d];
            residuals.merge(&FamilyResiduals {
                unitarity: m.unitarity_residual(),
                determinant: (m.det() - g).norm(),
                level_set: level_residual(&m, alpha),
                product_form: diff.iter().map(|z| z.norm()).fold(0.0, f64::max),
                conditions: cond[0].norm().max(cond[1].norm()),
            });
            m
        })
        .collect();
    Ok(TorusFamily {
        x1,
        alpha,
        gammas,
        matrices,
        residuals,
    })
}

/// Numeric and closed-form Jacobian determinant of
/// `(rho, theta, t) -> (Re b, Re d, Im d)` for `f(rho e^{i theta}, e^{i t})`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JacobianCheck {
    pub numeric: f64,
    pub closed_form: f64,
}

impl JacobianCheck {
    pub fn rel_err(&self) -> f64 {
        (self.numeric - self.closed_form).abs() / self.closed_form.abs().max(f64::MIN_POSITIVE)
    }
}

pub const JACOBIAN_STEP: f64 = 1e-5;

/// `2 rho^4 sqrt(1 - rho^2) Im(e^{i theta} + conj(alpha) e^{i(theta + t)}) (1 + Re conj(alpha) e^{i t})`.
pub fn jacobian_closed_form(rho: f64, theta: f64, t: f64, alpha: Complex64) -> f64 {
    let e_theta = Complex64::from_polar(1.0, theta);
    let e_t = Complex64::from_polar(1.0, t);
    2.0 * rho.powi(4)
        * (1.0 - rho * rho).sqrt()
        * (e_theta + alpha.conj() * e_theta * e_t).im
        * (1.0 + (alpha.conj() * e_t).re)
}

pub fn jacobian_rank_check(rho: f64, theta: f64, t: f64, alpha: Complex64) -> Result<JacobianCheck> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::Precondition(format!("rho = {rho} must lie in (0, 1)")));
    }
    let map = |v: [f64; 3]| {
        let m = family_matrix(Complex64::from_polar(v[0], v[1]), alpha, Complex64::from_polar(1.0, v[2]));
        [m.b.re, m.d.re, m.d.im]
    };
    let x = [rho, theta, t];
    let mut jac = [[0.0; 3]; 3];
    for c in 0..3 {
        let (mut hi, mut lo) = (x, x);
        hi[c] += JACOBIAN_STEP;
        lo[c] -= JACOBIAN_STEP;
        let (fh, fl) = (map(hi), map(lo));
        for r in 0..3 {
            jac[r][c] = (fh[r] - fl[r]) / (2.0 * JACOBIAN_STEP);
        }
    }
    let numeric = jac[0][0] * (jac[1][1] * jac[2][2] - jac[1][2] * jac[2][1])
        - jac[0][1] * (jac[1][0] * jac[2][2] - jac[1][2] * jac[2][0])
        + jac[0][2] * (jac[1][0] * jac[2][1] - jac[1][1] * jac[2][0]);
    Ok(JacobianCheck {
        numeric,
        closed_form: jacobian_closed_form(rho, theta, t, alpha),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn phi_values() {
        let m = MatrixPoint::new(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert_eq!(phi_i22(&m).unwrap(), c(-1.0, 0.0));
        let z = MatrixPoint::new(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(phi_i22(&z).unwrap(), c(0.0, 0.0));
        assert!(phi_i22(&MatrixPoint::identity()).is_err());
    }

    #[test]
    fn family_at_origin() {
        let f = torus_family(c(0.0, 0.0), c(1.0, 0.0), 1).unwrap();
        let m = f.matrices[0];
        assert_eq!(m, MatrixPoint::new(c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)));
        assert!(f.residuals.max() < 1e-15);
    }

    #[test]
    fn family_residuals_small() {
        let f = torus_family(c(0.5, 0.0), c(0.0, 1.0), 64).unwrap();
        assert_eq!(f.matrices.len(), 64);
        assert!(f.residuals.max() <= 1e-10, "{:?}", f.residuals);
        assert!(torus_family(c(1.0, 0.0), c(1.0, 0.0), 8).is_err());
    }

    #[test]
    fn jacobian_examples() {
        let half_pi = std::f64::consts::FRAC_PI_2;
        let j = jacobian_rank_check(0.5, half_pi, half_pi, c(1.0, 0.0)).unwrap();
        assert!(j.closed_form.abs() > 0.0);
        assert!(j.rel_err() < 1e-6, "{j:?}");
        // e^{it} = -alpha kills the last factor.
        let j = jacobian_rank_check(0.5, 1.0, std::f64::consts::PI, c(1.0, 0.0)).unwrap();
        assert!(j.closed_form.abs() < 1e-15);
        assert!(j.numeric.abs() < 1e-6);
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::symmetric::{haar_sample, POLE_EXCLUSION};

    proptest! {
        #[test]
        fn phi_i22_is_inner_on_haar_samples(seed in any::<u64>(), i in 0u64..1_000_000) {
            let m = haar_sample(seed, i);
            prop_assume!((Complex64::new(1.0, 0.0) - m.a).norm() > POLE_EXCLUSION);
            prop_assert!((phi_i22(&m).unwrap().norm() - 1.0).abs() < 1e-9);
            prop_assert!(m.unitarity_residual() < 1e-12);
        }

        #[test]
        fn family_stays_on_level_set(r in 0.0..0.99f64, t in 0.0..TAU, a in 0.0..TAU, g in 0.0..TAU) {
            let alpha = Complex64::from_polar(1.0, a);
            let m = family_matrix(Complex64::from_polar(r, t), alpha, Complex64::from_polar(1.0, g));
            prop_assert!(m.unitarity_residual() < 1e-12);
            prop_assert!(level_residual(&m, alpha) < 1e-12);
        }
    }
}
