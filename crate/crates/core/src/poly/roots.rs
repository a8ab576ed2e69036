//! Aberth–Ehrlich simultaneous root iteration, followed by clustering and a
//! unit-circle filter.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::UniPoly;
use crate::error::{Error, Result};

pub const DEFAULT_TOL_CIRCLE: f64 = 1e-8;

#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    /// Maximum allowed `| 1 - |root| |` for a root to count as unimodular.
    pub tol_circle: f64,
    pub max_iterations: usize,
    /// Restarts with randomly perturbed starting points after a failed run.
    pub restarts: usize,
    /// Roots closer than this (relative to their modulus) are merged.
    pub cluster_tol: f64,
    pub seed: u64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            tol_circle: DEFAULT_TOL_CIRCLE,
            max_iterations: 500,
            restarts: 3,
            cluster_tol: 1e-6,
            seed: 0x5eed,
        }
    }
}

/// Unimodular roots of a polynomial, projected onto the circle.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleRoots {
    pub roots: Vec<Complex64>,
    pub multiplicity: Vec<usize>,
    /// Max `|P(root)|` over the returned roots.
    pub residual: f64,
}

impl CircleRoots {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

/// Horner evaluation of `sum |a_k| |w|^k`, the scale of rounding error in
/// `P(w)`.
fn abs_bound(coeffs: &[Complex64], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

fn aberth_run(coeffs: &[Complex64], start: &mut [Complex64], max_iter: usize) -> bool {
    let n = start.len();
    let p = UniPoly {
        coeffs: coeffs.to_vec(),
    };
    let mut frozen = vec![false; n];
    for _ in 0..max_iter {
        let mut all_done = true;
        for k in 0..n {
            if frozen[k] {
                continue;
            }
            let z = start[k];
            let (v, dv) = p.eval_with_derivative(z);
            if v.norm() <= 8.0 * f64::EPSILON * abs_bound(coeffs, z.norm()) {
                frozen[k] = true;
                continue;
            }
            all_done = false;
            let ratio = if dv.norm() == 0.0 {
                Complex64::new(1e-8 * (1.0 + z.norm()), 0.0)
            } else {
                v / dv
            };
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z - start[j];
                    if d.norm() == 0.0 {
                        Complex64::default()
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * s;
            let step = if denom.norm() == 0.0 { ratio } else { ratio / denom };
            start[k] = z - step;
            if step.norm() <= 4.0 * f64::EPSILON * start[k].norm().max(f64::MIN_POSITIVE) {
                frozen[k] = true;
            }
        }
        if all_done {
            return true;
        }
    }
    frozen.iter().all(|&f| f)
}

fn initial_guesses(coeffs: &[Complex64], rng: Option<&mut ChaCha8Rng>) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].norm();
    let c0 = coeffs[0].norm();
    let radius = if c0 > 0.0 {
        (c0 / lead).powf(1.0 / n as f64)
    } else {
        1.0
    };
    let mut offset = 0.4;
    let mut jitter = vec![0.0; n];
    if let Some(rng) = rng {
        offset = rng.random::<f64>() * TAU;
        for j in jitter.iter_mut() {
            *j = (rng.random::<f64>() - 0.5) * 0.5;
        }
    }
    (0..n)
        .map(|k| Complex64::from_polar(radius * (1.0 + jitter[k]), TAU * k as f64 / n as f64 + offset))
        .collect()
}

/// All complex roots of `p` (with repetition), by Aberth–Ehrlich iteration
/// with randomized restarts.
pub fn all_roots(p: &UniPoly, opts: &RootOptions) -> Result<Vec<Complex64>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let coeffs = p.coeffs();
    let zeros_at_origin = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = &coeffs[zeros_at_origin..];
    let mut roots = vec![Complex64::default(); zeros_at_origin];
    match reduced.len() {
        0 | 1 => return Ok(roots),
        2 => {
            roots.push(-reduced[0] / reduced[1]);
            return Ok(roots);
        }
        _ => {}
    }
    let lead = reduced[reduced.len() - 1];
    let monic: Vec<Complex64> = reduced.iter().map(|c| c / lead).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut guesses = initial_guesses(&monic, None);
    for attempt in 0..=opts.restarts {
        if aberth_run(&monic, &mut guesses, opts.max_iterations) {
            roots.extend(guesses);
            return Ok(roots);
        }
        if attempt < opts.restarts {
            guesses = initial_guesses(&monic, Some(&mut rng));
        }
    }
    let mono = UniPoly {
        coeffs: monic.clone(),
    };
    let residual = guesses
        .iter()
        .map(|z| mono.eval(*z).norm())
        .fold(0.0, f64::max);
    Err(Error::NonConvergence {
        iterations: opts.max_iterations * (opts.restarts + 1),
        residual,
    })
}

fn newton_polish(p: &UniPoly, mut z: Complex64, steps: usize) -> Complex64 {
    let mut best = (p.eval(z).norm(), z);
    for _ in 0..steps {
        let (v, dv) = p.eval_with_derivative(z);
        if dv.norm() == 0.0 || v.norm() == 0.0 {
            break;
        }
        z -= v / dv;
        let r = p.eval(z).norm();
        if r < best.0 {
            best = (r, z);
        } else {
            break;
        }
    }
    best.1
}

/// Unimodular roots of `p` with the default options and the given circle
/// tolerance.
pub fn roots_on_circle(p: &UniPoly, tol_circle: f64) -> Result<CircleRoots> {
    roots_on_circle_with(
        p,
        &RootOptions {
            tol_circle,
            ..RootOptions::default()
        },
    )
}

/// Finds all roots, merges clusters, keeps those within `tol_circle` of the
/// unit circle, and projects each kept root to modulus one.
pub fn roots_on_circle_with(p: &UniPoly, opts: &RootOptions) -> Result<CircleRoots> {
    let raw = all_roots(p, opts)?;

    // Greedy clustering; the mean of a cluster is well conditioned even when
    // the individual members of a multiple root are not.
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for r in raw {
        let hit = clusters.iter_mut().find(|(c, m)| {
            let center = *c / *m as f64;
            (center - r).norm() <= opts.cluster_tol * center.norm().max(1.0)
        });
        match hit {
            Some((sum, m)) => {
                *sum += r;
                *m += 1;
            }
            None => clusters.push((r, 1)),
        }
    }

    let mut roots = Vec::new();
    let mut multiplicity = Vec::new();
    for (sum, m) in clusters {
        let mut center = sum / m as f64;
        if m == 1 {
            center = newton_polish(p, center, 4);
        } else {
            // An m-fold root is a simple root of the (m-1)-th derivative.
            let mut d = p.clone();
            for _ in 1..m {
                d = d.derivative();
            }
            center = newton_polish(&d, center, 6);
        }
        if (1.0 - center.norm()).abs() <= opts.tol_circle {
            roots.push(center / center.norm());
            multiplicity.push(m);
        }
    }
    // Sort by argument in [0, 2pi) for a canonical order.
    let mut order: Vec<usize> = (0..roots.len()).collect();
    order.sort_by(|&a, &b| {
        let ta = roots[a].arg().rem_euclid(TAU);
        let tb = roots[b].arg().rem_euclid(TAU);
        ta.total_cmp(&tb)
    });
    let roots: Vec<Complex64> = order.iter().map(|&i| roots[i]).collect();
    let multiplicity: Vec<usize> = order.iter().map(|&i| multiplicity[i]).collect();
    let residual = roots.iter().map(|r| p.eval(*r).norm()).fold(0.0, f64::max);
    Ok(CircleRoots {
        roots,
        multiplicity,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn linear_unimodular_root() {
        let alpha = Complex64::from_polar(1.0, 0.7);
        let p = UniPoly::new(vec![-alpha, c(1.0, 0.0)]);
        let r = roots_on_circle(&p, DEFAULT_TOL_CIRCLE).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r.roots[0] - alpha).norm() < 1e-15);
    }

    #[test]
    fn plus_minus_one() {
        let r = roots_on_circle(&UniPoly::from_real(&[-1.0, 0.0, 1.0]), DEFAULT_TOL_CIRCLE).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r.roots[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((r.roots[1] - c(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn only_unimodular_root_survives() {
        let p = UniPoly::from_roots(c(1.0, 0.0), &[c(0.5, 0.0), c(2.0, 0.0), c(0.0, 1.0)]);
        let r = roots_on_circle(&p, DEFAULT_TOL_CIRCLE).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert!((r.roots[0] - c(0.0, 1.0)).norm() < 1e-13);
        assert!(r.residual <= 1e-9 * p.norm());
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(matches!(
            roots_on_circle(&UniPoly::zero(), DEFAULT_TOL_CIRCLE),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn constant_has_no_roots() {
        let r = roots_on_circle(&UniPoly::from_real(&[3.0]), DEFAULT_TOL_CIRCLE).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn double_root_on_circle_is_merged() {
        let z = Complex64::from_polar(1.0, 1.1);
        let p = UniPoly::from_roots(c(1.0, 0.0), &[z, z, c(0.3, 0.2)]);
        let r = roots_on_circle(&p, DEFAULT_TOL_CIRCLE).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert_eq!(r.multiplicity, vec![2]);
        assert!((r.roots[0] - z).norm() < 1e-7);
    }

    #[test]
    fn all_roots_degree_eight() {
        let want: Vec<Complex64> = (0..8)
            .map(|k| Complex64::from_polar(0.5 + 0.2 * k as f64, 0.9 * k as f64))
            .collect();
        let p = UniPoly::from_roots(c(2.0, -1.0), &want);
        let got = all_roots(&p, &RootOptions::default()).unwrap();
        assert_eq!(got.len(), 8);
        for w in &want {
            let d = got.iter().map(|g| (g - w).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-10, "missing root {w}");
        }
    }

    #[test]
    fn roots_at_origin_are_stripped() {
        let p = UniPoly::from_roots(c(1.0, 0.0), &[c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let got = all_roots(&p, &RootOptions::default()).unwrap();
        assert_eq!(got.iter().filter(|z| z.norm() == 0.0).count(), 2);
        let r = roots_on_circle(&p, DEFAULT_TOL_CIRCLE).unwrap();
        assert_eq!(r.roots, vec![c(-1.0, 0.0)]);
    }
}
