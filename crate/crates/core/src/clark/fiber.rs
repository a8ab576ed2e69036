use num_complex::Complex64;
use serde::Serialize;

use super::rif::{DomainKind, RationalInnerFn};
use crate::error::{Error, Result};
use crate::poly::{roots_on_circle_with, RootOptions, UniPoly, DEFAULT_TOL_CIRCLE};
use crate::symmetric::MatrixPoint;

/// Tuning knobs for fiber construction.
#[derive(Clone, Copy, Debug)]
pub struct FiberOptions {
    pub tol_circle: f64,
    /// A fiber is skipped when `|q_f|` at a retained root is below this
    /// times the scale of `q_f`.
    pub singular_tol: f64,
    /// Atoms must satisfy `|p - alpha q| <= concentration_tol * scale`.
    pub concentration_tol: f64,
}

impl Default for FiberOptions {
    fn default() -> Self {
        Self {
            tol_circle: DEFAULT_TOL_CIRCLE,
            singular_tol: 1e-8,
            concentration_tol: 1e-6,
        }
    }
}

/// A point mass `weight * delta_{w * zeta}` on one circular fiber.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Atom {
    /// Unimodular fiber coordinate.
    pub w: Complex64,
    /// `w * zeta` on the Šilov boundary.
    pub point: Vec<Complex64>,
    pub weight: f64,
}

/// Clark measure of the restriction of `phi` to one circular fiber.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberMeasure {
    /// Representative boundary point of the fiber.
    pub fiber_rep: Vec<Complex64>,
    pub atoms: Vec<Atom>,
    /// Set when the fiber met the singular set; `atoms` is then empty.
    pub skipped: bool,
}

impl FiberMeasure {
    pub fn mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }
}

pub(crate) fn check_alpha(alpha: Complex64) -> Result<()> {
    if (alpha.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!("|alpha| = {} is not 1", alpha.norm())));
    }
    Ok(())
}

fn check_boundary_point(domain: DomainKind, zeta: &[Complex64]) -> Result<()> {
    match domain {
        DomainKind::Polydisc => {
            if let Some(z) = zeta.iter().find(|z| (z.norm() - 1.0).abs() > 1e-10) {
                return Err(Error::Precondition(format!(
                    "fiber representative has a coordinate of modulus {}",
                    z.norm()
                )));
            }
        }
        DomainKind::MatrixBall2x2 => {
            let r = MatrixPoint::from_slice(zeta).unitarity_residual();
            if r > 1e-10 {
                return Err(Error::Precondition(format!(
                    "fiber representative is not unitary (residual {r:.3e})"
                )));
            }
        }
    }
    Ok(())
}

/// Derivative of `p_f / q_f` at `w`.
fn quotient_derivative(pf: &UniPoly, qf: &UniPoly, w: Complex64) -> (Complex64, Complex64) {
    let (p, dp) = pf.eval_with_derivative(w);
    let (q, dq) = qf.eval_with_derivative(w);
    ((dp * q - p * dq) / (q * q), q)
}

/// Atoms of the Clark measure of `w -> phi(w zeta)` at `alpha`.
///
/// Atoms sit at the unimodular roots of `p_f - alpha q_f` with weight
/// `1 / |psi'(w)|`, `psi = p_f / q_f`.
pub fn fiber_clark_measure(
    phi: &RationalInnerFn,
    alpha: Complex64,
    zeta: &[Complex64],
    opts: &FiberOptions,
) -> Result<FiberMeasure> {
    check_alpha(alpha)?;
    if zeta.len() != phi.nvars() {
        return Err(Error::DimensionMismatch {
            expected: phi.nvars(),
            got: zeta.len(),
        });
    }
    check_boundary_point(phi.domain(), zeta)?;

    let (pf, qf) = phi.fiber_polynomials(zeta)?;
    let hf = &pf - &qf.scale(alpha);
    let skipped = |zeta: &[Complex64]| FiberMeasure {
        fiber_rep: zeta.to_vec(),
        atoms: Vec::new(),
        skipped: true,
    };
    if hf.is_zero() {
        return Ok(skipped(zeta));
    }
    let roots = roots_on_circle_with(
        &hf,
        &RootOptions {
            tol_circle: opts.tol_circle,
            ..RootOptions::default()
        },
    )?;
    let q_scale = qf.coeffs().iter().map(|c| c.norm()).sum::<f64>();
    let mut atoms = Vec::with_capacity(roots.len());
    for &w in &roots.roots {
        let (dpsi, q) = quotient_derivative(&pf, &qf, w);
        if q.norm() <= opts.singular_tol * q_scale || !dpsi.is_finite() || dpsi.norm() == 0.0 {
            return Ok(skipped(zeta));
        }
        atoms.push(Atom {
            w,
            point: zeta.iter().map(|z| z * w).collect(),
            weight: 1.0 / dpsi.norm(),
        });
    }
    Ok(FiberMeasure {
        fiber_rep: zeta.to_vec(),
        atoms,
        skipped: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::symmetric::haar_sample;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn identity_factor_single_atom() {
        let e = Complex64::from_polar(1.0, 0.9);
        let m = fiber_clark_measure(&catalog::z1(2), one(), &[one(), e], &FiberOptions::default()).unwrap();
        assert_eq!(m.atoms.len(), 1);
        assert!((m.atoms[0].w - one()).norm() < 1e-15);
        assert!((m.atoms[0].point[1] - e).norm() < 1e-15);
        assert!((m.atoms[0].weight - 1.0).abs() < 1e-14);
    }

    #[test]
    fn product_two_half_atoms() {
        // psi(w) = w^2: roots +-1 and |psi'| = 2 there.
        let m = fiber_clark_measure(&catalog::z1z2(), one(), &[one(), one()], &FiberOptions::default()).unwrap();
        assert_eq!(m.atoms.len(), 2);
        for a in &m.atoms {
            assert!((a.w.norm() - 1.0).abs() < 1e-15);
            assert!((a.w * a.w - one()).norm() < 1e-14);
            assert!((a.weight - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn matrix_ball_fiber_mass() {
        let phi = catalog::phi_i22();
        let alpha = Complex64::from_polar(1.0, 2.0);
        for i in 0..50 {
            let u = haar_sample(11, i).to_vec();
            let m = fiber_clark_measure(&phi, alpha, &u, &FiberOptions::default()).unwrap();
            assert!(m.atoms.len() <= phi.degree_bound());
            // phi(0) = 0, so each fiber carries unit mass.
            assert!((m.mass() - 1.0).abs() < 1e-10, "{}", m.mass());
            for a in &m.atoms {
                let r = phi.level_polynomial(alpha).eval(&a.point).unwrap();
                assert!(r.norm() <= 1e-6 * phi.scale());
            }
        }
    }

    #[test]
    fn singular_fiber_is_skipped() {
        // The rif11 fiber through (1, 1) meets q = 0 at w = 1.
        let m = fiber_clark_measure(&catalog::rif11(), one(), &[one(), one()], &FiberOptions::default()).unwrap();
        assert!(m.skipped);
        assert!(m.atoms.is_empty());
    }

    #[test]
    fn rejects_bad_inputs() {
        let phi = catalog::z1(2);
        let opts = FiberOptions::default();
        assert!(fiber_clark_measure(&phi, Complex64::new(0.5, 0.0), &[one(), one()], &opts).is_err());
        assert!(fiber_clark_measure(&phi, one(), &[one(), Complex64::new(0.5, 0.0)], &opts).is_err());
        assert!(fiber_clark_measure(&phi, one(), &[one()], &opts).is_err());
    }
}
