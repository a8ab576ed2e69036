use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::fiber::check_alpha;
use super::rif::{DomainKind, RationalInnerFn};
use crate::error::{Error, Result};
use crate::poly::{content_in_variable, roots_on_circle, MultiPoly, DEFAULT_TOL_CIRCLE, DEFAULT_TOL_RANK};
use crate::sum::CompensatedSum;

/// `H^n(T^n) = (2 pi)^n` for the bidisc, under unit-cube Hausdorff
/// normalization.
pub const TORUS_MEASURE_2: f64 = TAU * TAU;

/// Fractional offset of the `theta_2` grid, chosen irrational so that grid
/// points avoid the rational angles where singular points usually sit.
const THETA_OFFSET: f64 = 0.381_966_011_250_105;

/// Points with `|grad phi|` below this are dropped.
const MIN_GRAD: f64 = 1e-10;
const MAX_LEVEL_RESIDUAL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelSetPoint {
    pub theta2: f64,
    pub zeta: [Complex64; 2],
    pub grad_norm: f64,
    /// `2 pi / (c |grad phi|)`.
    pub density: f64,
    /// `sqrt(|d zeta_1 / d theta_2|^2 + 1) * dtheta_2`.
    pub arclen: f64,
    pub branch: usize,
}

/// Quadrature nodes on `V_alpha` for a bivariate RIF, one column of roots per
/// `theta_2` grid value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelSetSample {
    pub alpha: Complex64,
    pub n_theta: usize,
    pub points: Vec<LevelSetPoint>,
    /// Changes in the number of roots between neighbouring columns, plus
    /// points whose branch neighbour could not be matched.
    pub branch_events: usize,
    /// Points dropped as (near) singular.
    pub excluded: usize,
}

impl LevelSetSample {
    pub fn integrate<F>(&self, f: F) -> Complex64
    where
        F: Fn(&[Complex64]) -> Complex64,
    {
        self.points
            .iter()
            .map(|pt| f(&pt.zeta) * (pt.density * pt.arclen))
            .collect::<CompensatedSum>()
            .value()
    }

    pub fn total_mass(&self) -> f64 {
        self.integrate(|_| Complex64::new(1.0, 0.0)).re
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["theta2", "re_zeta1", "im_zeta1", "grad_norm", "density", "arclen", "branch"])?;
        for p in &self.points {
            wtr.write_record([
                p.theta2.to_string(),
                p.zeta[0].re.to_string(),
                p.zeta[0].im.to_string(),
                p.grad_norm.to_string(),
                p.density.to_string(),
                p.arclen.to_string(),
                p.branch.to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// `sum density * arclen * f(point)`.
pub fn integrate_coarea<F>(sample: &LevelSetSample, f: F) -> Complex64
where
    F: Fn(&[Complex64]) -> Complex64,
{
    sample.integrate(f)
}

/// Index of the root in `col` nearest to `z`, provided it is closer than half
/// the smallest gap between roots of `col`.
fn match_nearest(col: &[Complex64], z: Complex64) -> Option<usize> {
    let (best, dist) = col
        .iter()
        .enumerate()
        .map(|(i, w)| (i, (w - z).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))?;
    let mut gap = f64::INFINITY;
    for (i, a) in col.iter().enumerate() {
        for b in &col[i + 1..] {
            gap = gap.min((a - b).norm());
        }
    }
    (dist < 0.5 * gap).then_some(best)
}

/// Rejects level sets containing vertical circles `T x {zeta_2}`, which a
/// `theta_2` sweep cannot see.
fn check_no_vertical_circles(h: &MultiPoly) -> Result<()> {
    let content = content_in_variable(h, 0, DEFAULT_TOL_RANK)?;
    if content.degree().unwrap_or(0) == 0 {
        return Ok(());
    }
    let c = content.to_unipoly_in(1)?;
    let hits = roots_on_circle(&c, DEFAULT_TOL_CIRCLE)?;
    if hits.is_empty() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "level set contains {} circle(s) zeta_2 = const; trace in the other variable",
            hits.len()
        )))
    }
}

/// Traces `V_alpha` on the 2-torus by solving for `zeta_1` on a uniform
/// `theta_2` grid.
pub fn trace_level_set(phi: &RationalInnerFn, alpha: Complex64, n_theta: usize) -> Result<LevelSetSample> {
    check_alpha(alpha)?;
    if phi.domain() != DomainKind::Polydisc || phi.nvars() != 2 {
        return Err(Error::Unsupported("level-set tracing needs a bivariate polydisc function".into()));
    }
    if n_theta < 8 {
        return Err(Error::Precondition(format!("n_theta = {n_theta} is below 8")));
    }
    let h = phi.level_polynomial(alpha);
    if h.is_zero() {
        return Err(Error::InvalidFunction("p - alpha q vanishes identically".into()));
    }
    check_no_vertical_circles(&h)?;
    let dtheta = TAU / n_theta as f64;
    let thetas: Vec<f64> = (0..n_theta).map(|k| (k as f64 + THETA_OFFSET) * dtheta).collect();

    let columns = thetas
        .par_iter()
        .map(|&t| {
            let z2 = Complex64::from_polar(1.0, t);
            let u = h.substitute_except(0, &[Complex64::default(), z2])?;
            if u.degree().unwrap_or(0) == 0 {
                return Ok(Vec::new());
            }
            Ok(roots_on_circle(&u, DEFAULT_TOL_CIRCLE)?.roots)
        })
        .collect::<Result<Vec<Vec<Complex64>>>>()?;

    let dh1 = h.partial(0);
    let dh2 = h.partial(1);
    let scale = phi.scale();
    let mut points = Vec::new();
    let mut branch_events = 0;
    let mut excluded = 0;
    let mut next_branch = 0;
    let mut prev_ids: Vec<usize> = Vec::new();

    for k in 0..n_theta {
        let col = &columns[k];
        let before = &columns[(k + n_theta - 1) % n_theta];
        let after = &columns[(k + 1) % n_theta];
        if k > 0 && col.len() != columns[k - 1].len() {
            branch_events += 1;
        }
        let z2 = Complex64::from_polar(1.0, thetas[k]);
        let mut ids = Vec::with_capacity(col.len());
        for &z1 in col {
            let id = match (k > 0).then(|| match_nearest(&columns[k - 1], z1)).flatten() {
                Some(i) => prev_ids[i],
                None => {
                    next_branch += 1;
                    next_branch - 1
                }
            };
            ids.push(id);
            let zeta = [z1, z2];
            if h.eval(&zeta)?.norm() > MAX_LEVEL_RESIDUAL * scale {
                excluded += 1;
                continue;
            }
            let grad = match phi.gradient_at(&zeta) {
                Ok(g) => g,
                Err(_) => {
                    excluded += 1;
                    continue;
                }
            };
            let grad_norm = grad.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
            if !grad_norm.is_finite() || grad_norm < MIN_GRAD {
                excluded += 1;
                continue;
            }
            // d theta_1 / d theta_2 by a central difference along the branch.
            let slope = match (match_nearest(before, z1), match_nearest(after, z1)) {
                (Some(a), Some(b)) if match_nearest(col, before[a]).is_some() && match_nearest(col, after[b]).is_some() => {
                    (after[b] * before[a].conj()).arg() / (2.0 * dtheta)
                }
                _ => {
                    branch_events += 1;
                    let d1 = dh1.eval(&zeta)?;
                    let d2 = dh2.eval(&zeta)?;
                    (-(d2 * Complex64::i() * z2) / d1).norm()
                }
            };
            let density = TAU / (TORUS_MEASURE_2 * grad_norm);
            points.push(LevelSetPoint {
                theta2: thetas[k],
                zeta,
                grad_norm,
                density,
                arclen: (slope * slope + 1.0).sqrt() * dtheta,
                branch: id,
            });
        }
        prev_ids = ids;
    }
    Ok(LevelSetSample {
        alpha,
        n_theta,
        points,
        branch_events,
        excluded,
    })
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
    fn coordinate_level_set() {
        let s = trace_level_set(&catalog::z1(2), one(), 256).unwrap();
        assert_eq!(s.points.len(), 256);
        for p in &s.points {
            assert!((p.zeta[0] - one()).norm() < 1e-14);
            assert!((p.arclen - TAU / 256.0).abs() < 1e-14);
            assert!((p.density - 1.0 / TAU).abs() < 1e-14);
            assert_eq!(p.branch, 0);
        }
        assert!((s.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_level_set() {
        let alpha = Complex64::from_polar(1.0, 0.8);
        let s = trace_level_set(&catalog::z1z2(), alpha, 512).unwrap();
        for p in &s.points {
            assert!((p.zeta[0] * p.zeta[1] - alpha).norm() < 1e-12);
            assert!((p.grad_norm - 2f64.sqrt()).abs() < 1e-12);
        }
        assert!((s.total_mass() - 1.0).abs() < 1e-9);
        assert!((integrate_coarea(&s, |z| z[0] * z[1]) - alpha).norm() < 1e-9);
        assert_eq!(s.branch_events, 0);
    }

    #[test]
    fn rif_matches_fiber_mass() {
        let phi = catalog::rif11();
        let s = trace_level_set(&phi, one(), 2048).unwrap();
        let mu = assemble_polydisc(&phi, one(), 512, 0, &FiberOptions::default()).unwrap();
        assert!((s.total_mass() - mu.total_mass()).abs() < 1e-3);
    }

    #[test]
    fn vertical_circles_unsupported() {
        assert!(matches!(trace_level_set(&catalog::z2(), one(), 64), Err(Error::Unsupported(_))));
    }

    #[test]
    fn csv_columns() {
        let s = trace_level_set(&catalog::z1z2(), one(), 16).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("theta2,re_zeta1,im_zeta1,grad_norm,density,arclen,branch\n"));
        assert_eq!(text.lines().count(), 17);
    }
}
