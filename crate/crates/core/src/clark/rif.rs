use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{all_roots, MultiPoly, RootOptions, UniPoly};
use crate::symmetric::{haar_unitary, MatrixPoint};

/// Which bounded symmetric domain the function lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    /// The unit polydisc; Šilov boundary is the torus.
    Polydisc,
    /// 2x2 matrices of operator norm < 1, variables `(a, b, c, d)` row-major;
    /// Šilov boundary is U(2).
    #[serde(rename = "matrix_ball_2x2")]
    MatrixBall2x2,
}

/// Sampled evidence that `p/q` is inner.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InnernessCertificate {
    /// Max `| |phi| - 1 |` over boundary samples away from the singular set.
    pub max_boundary_deviation: f64,
    /// Min `|q|` over interior samples of the domain.
    pub min_abs_q: f64,
    pub boundary_samples: usize,
    /// Boundary samples dropped because `|q|` was below the singular cutoff.
    pub singular_excluded: usize,
}

/// Boundary samples with `|q| < SINGULAR_CUTOFF * scale(q)` are treated as
/// lying on the singular set.
const SINGULAR_CUTOFF: f64 = 1e-8;
const MAX_DEVIATION: f64 = 1e-6;
const MIN_Q: f64 = 1e-10;

/// A rational inner function `phi = p / q`.
#[derive(Clone, Debug)]
pub struct RationalInnerFn {
    p: MultiPoly,
    q: MultiPoly,
    domain: DomainKind,
    grad_p: Vec<MultiPoly>,
    grad_q: Vec<MultiPoly>,
    certificate: InnernessCertificate,
}

impl RationalInnerFn {
    /// Validates `p/q` on the given domain. Fails when `q` nearly vanishes
    /// inside the domain or `|phi|` is not unimodular on sampled boundary
    /// points.
    pub fn new(p: MultiPoly, q: MultiPoly, domain: DomainKind) -> Result<Self> {
        if p.nvars() != q.nvars() {
            return Err(Error::InvalidFunction(format!(
                "p has {} variables but q has {}",
                p.nvars(),
                q.nvars()
            )));
        }
        if p.nvars() == 0 {
            return Err(Error::InvalidFunction("no variables".into()));
        }
        if q.is_zero() {
            return Err(Error::InvalidFunction("denominator is zero".into()));
        }
        if domain == DomainKind::MatrixBall2x2 && p.nvars() != 4 {
            return Err(Error::InvalidFunction(format!(
                "the 2x2 matrix ball needs 4 variables, got {}",
                p.nvars()
            )));
        }
        let grad_p = p.gradient();
        let grad_q = q.gradient();
        let mut f = Self {
            p,
            q,
            domain,
            grad_p,
            grad_q,
            certificate: InnernessCertificate {
                max_boundary_deviation: 0.0,
                min_abs_q: 0.0,
                boundary_samples: 0,
                singular_excluded: 0,
            },
        };
        f.certificate = f.certify();
        if f.certificate.min_abs_q < MIN_Q {
            return Err(Error::InvalidFunction(format!(
                "denominator nearly vanishes inside the domain (min |q| = {:.3e})",
                f.certificate.min_abs_q
            )));
        }
        if let Some(z) = f.interior_zero_of_q()? {
            return Err(Error::InvalidFunction(format!(
                "denominator has a zero inside the domain near {z:?}"
            )));
        }
        if f.certificate.max_boundary_deviation > MAX_DEVIATION {
            return Err(Error::InvalidFunction(format!(
                "not inner: max ||phi| - 1| = {:.3e} on boundary samples",
                f.certificate.max_boundary_deviation
            )));
        }
        Ok(f)
    }

    pub fn polydisc(p: MultiPoly, q: MultiPoly) -> Result<Self> {
        Self::new(p, q, DomainKind::Polydisc)
    }

    pub fn matrix_ball(p: MultiPoly, q: MultiPoly) -> Result<Self> {
        Self::new(p, q, DomainKind::MatrixBall2x2)
    }

    pub fn p(&self) -> &MultiPoly {
        &self.p
    }

    pub fn q(&self) -> &MultiPoly {
        &self.q
    }

    pub fn domain(&self) -> DomainKind {
        self.domain
    }

    pub fn nvars(&self) -> usize {
        self.p.nvars()
    }

    pub fn certificate(&self) -> &InnernessCertificate {
        &self.certificate
    }

    /// `max(deg p, deg q)`, the bound on atoms per fiber.
    pub fn degree_bound(&self) -> usize {
        self.p.degree().unwrap_or(0).max(self.q.degree().unwrap_or(0)) as usize
    }

    /// Scale used for residual tolerances: sum of coefficient magnitudes of
    /// `p` and `q`.
    pub fn scale(&self) -> f64 {
        self.p.l1_norm() + self.q.l1_norm()
    }

    /// `p - alpha q`, whose zero set on the boundary is the level set.
    pub fn level_polynomial(&self, alpha: Complex64) -> MultiPoly {
        &self.p - &self.q.scale(alpha)
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        let q = self.q.eval(z)?;
        Ok(self.p.eval_unchecked(z) / q)
    }

    /// Complex gradient `(grad p) / q - p (grad q) / q^2`.
    pub fn gradient_at(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        let q = self.q.eval(z)?;
        let p = self.p.eval_unchecked(z);
        Ok(self
            .grad_p
            .iter()
            .zip(&self.grad_q)
            .map(|(dp, dq)| {
                (dp.eval_unchecked(z) * q - p * dq.eval_unchecked(z)) / (q * q)
            })
            .collect())
    }

    /// Restrictions `w -> p(w zeta)` and `w -> q(w zeta)`.
    pub fn fiber_polynomials(&self, zeta: &[Complex64]) -> Result<(UniPoly, UniPoly)> {
        Ok((self.p.restrict_to_fiber(zeta)?, self.q.restrict_to_fiber(zeta)?))
    }

    /// Multiplies numerator and denominator by the same scalar.
    pub fn rescaled(&self, s: Complex64) -> Result<Self> {
        Self::new(self.p.scale(s), self.q.scale(s), self.domain)
    }

    fn certify(&self) -> InnernessCertificate {
        let q_scale = self.q.l1_norm();
        let mut max_dev: f64 = 0.0;
        let mut excluded = 0;
        let boundary = self.boundary_samples();
        for z in &boundary {
            let q = self.q.eval_unchecked(z);
            if q.norm() < SINGULAR_CUTOFF * q_scale {
                excluded += 1;
                continue;
            }
            let v = self.p.eval_unchecked(z) / q;
            max_dev = max_dev.max((v.norm() - 1.0).abs());
        }
        let min_q = self
            .interior_samples()
            .iter()
            .map(|z| self.q.eval_unchecked(z).norm())
            .fold(f64::INFINITY, f64::min);
        InnernessCertificate {
            max_boundary_deviation: max_dev,
            min_abs_q: min_q,
            boundary_samples: boundary.len(),
            singular_excluded: excluded,
        }
    }

    /// Looks for zeros of `q` inside the domain along one-variable slices
    /// through interior samples (polydisc) or along circular fibers through
    /// boundary samples (matrix ball).
    fn interior_zero_of_q(&self) -> Result<Option<Vec<Complex64>>> {
        const INSIDE: f64 = 1.0 - 1e-9;
        let inside = |u: &UniPoly| -> Result<Option<Complex64>> {
            if u.degree().unwrap_or(0) == 0 {
                return Ok(None);
            }
            Ok(all_roots(u, &RootOptions::default())?
                .into_iter()
                .find(|w| w.norm() < INSIDE))
        };
        match self.domain {
            DomainKind::Polydisc => {
                for z in self.interior_samples().iter().step_by(3) {
                    for j in 0..self.nvars() {
                        if let Some(w) = inside(&self.q.substitute_except(j, z)?)? {
                            let mut hit = z.clone();
                            hit[j] = w;
                            return Ok(Some(hit));
                        }
                    }
                }
            }
            DomainKind::MatrixBall2x2 => {
                for z in self.boundary_samples().iter().step_by(4) {
                    if let Some(w) = inside(&self.q.restrict_to_fiber(z)?)? {
                        return Ok(Some(z.iter().map(|c| c * w).collect()));
                    }
                }
            }
        }
        Ok(None)
    }

    fn per_axis(&self, budget: f64) -> usize {
        (budget.powf(1.0 / self.nvars() as f64).floor() as usize).clamp(4, 64)
    }

    fn boundary_samples(&self) -> Vec<Vec<Complex64>> {
        match self.domain {
            DomainKind::Polydisc => {
                let m = self.per_axis(4096.0);
                // Offset angles keep the grid off the real axis, where
                // singular points of common examples sit.
                torus_grid(self.nvars(), m, 0.371)
            }
            DomainKind::MatrixBall2x2 => {
                let mut rng = ChaCha8Rng::seed_from_u64(0xC1A2);
                (0..2048).map(|_| haar_unitary(&mut rng).to_vec()).collect()
            }
        }
    }

    fn interior_samples(&self) -> Vec<Vec<Complex64>> {
        const RADII: [f64; 6] = [0.0, 0.25, 0.5, 0.75, 0.9, 0.99];
        match self.domain {
            DomainKind::Polydisc => {
                let n = self.nvars();
                let m = self.per_axis(2048.0).min(16);
                let angles = torus_grid(n, m, 0.5);
                let mut out = Vec::new();
                // Each coordinate gets its own radius index to cover
                // non-diagonal radii as well.
                let radii_count = RADII.len().pow(n.min(3) as u32);
                for ridx in 0..radii_count {
                    let mut rad = vec![RADII[RADII.len() - 1]; n];
                    let mut k = ridx;
                    for r in rad.iter_mut().take(n.min(3)) {
                        *r = RADII[k % RADII.len()];
                        k /= RADII.len();
                    }
                    for a in angles.iter().step_by(angles.len().div_ceil(64)) {
                        out.push(a.iter().zip(&rad).map(|(z, r)| z * r).collect());
                    }
                }
                out
            }
            DomainKind::MatrixBall2x2 => {
                let mut rng = ChaCha8Rng::seed_from_u64(0xB411);
                let mut out = Vec::new();
                for i in 0..1024 {
                    let u = haar_unitary(&mut rng);
                    let v = haar_unitary(&mut rng);
                    let s1 = RADII[i % RADII.len()];
                    let s2 = RADII[(i / RADII.len()) % RADII.len()];
                    let d = MatrixPoint::new(
                        Complex64::new(s1, 0.0),
                        Complex64::default(),
                        Complex64::default(),
                        Complex64::new(s2, 0.0),
                    );
                    out.push(u.mul(&d).mul(&v).to_vec());
                }
                out
            }
        }
    }
}

/// Uniform product grid on the n-torus with a fractional angular offset.
pub(crate) fn torus_grid(n: usize, m: usize, offset: f64) -> Vec<Vec<Complex64>> {
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let k = idx % m;
                    idx /= m;
                    Complex64::from_polar(1.0, TAU * (k as f64 + offset) / m as f64)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn accepts_catalog_functions() {
        for f in [catalog::z1(2), catalog::z1z2(), catalog::rif11(), catalog::z1_blaschke(0.2)] {
            let c = f.certificate();
            assert!(c.max_boundary_deviation < 1e-12, "{c:?}");
            assert!(c.min_abs_q > 1e-3);
        }
        let c = catalog::phi_i22().certificate().clone();
        assert!(c.max_boundary_deviation < 1e-6, "{c:?}");
    }

    #[test]
    fn rejects_non_inner() {
        let p = MultiPoly::var(2, 0).scale(Complex64::new(0.5, 0.0));
        assert!(matches!(
            RationalInnerFn::polydisc(p, MultiPoly::one(2)),
            Err(Error::InvalidFunction(_))
        ));
    }

    #[test]
    fn rejects_pole_inside() {
        // 1 / (z1 - 0.5) has a pole in the disc.
        let q = MultiPoly::from_real_terms(1, &[(&[1], 1.0), (&[0], -0.5)]).unwrap();
        let p = MultiPoly::from_real_terms(1, &[(&[0], 1.0), (&[1], -0.5)]).unwrap();
        assert!(RationalInnerFn::polydisc(p, q).is_err());
    }

    #[test]
    fn rejects_wrong_matrix_dimension() {
        assert!(RationalInnerFn::matrix_ball(MultiPoly::var(2, 0), MultiPoly::one(2)).is_err());
    }

    #[test]
    fn gradient_matches_closed_form() {
        let f = catalog::z1z2();
        let z = [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.5)];
        let g = f.gradient_at(&z).unwrap();
        assert!((g[0] - z[1]).norm() < 1e-15);
        assert!((g[1] - z[0]).norm() < 1e-15);
    }
}
