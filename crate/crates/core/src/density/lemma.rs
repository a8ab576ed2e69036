use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{all_roots, RootOptions, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LemmaOutcome {
    /// `min_x |p(x)| / |p(1)|` over the grid on `[0, 1]`.
    pub min_ratio: f64,
    /// `(epsilon / 2)^k`.
    pub bound: f64,
    pub holds: bool,
}

/// Signed distance-like test for the hull `C` of `B(0, eps)` and `{1}`:
/// `min_t |z - t| - (1 - t) eps`, which is `<= 0` exactly on `C`.
pub fn hull_margin(z: Complex64, eps: f64) -> f64 {
    // Convex in t, so a ternary search on [0, 1] finds the minimum.
    let g = |t: f64| (z - t).norm() - (1.0 - t) * eps;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..100 {
        let a = lo + (hi - lo) / 3.0;
        let b = hi - (hi - lo) / 3.0;
        if g(a) <= g(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    g(0.5 * (lo + hi)).min(g(0.0)).min(g(1.0))
}

/// Checks `|p(x)| >= (eps/2)^k |p(1)|` on `n_x` equally spaced points of
/// `[0, 1]`, for `p` zero-free on the hull of `B(0, eps)` and `{1}`.
pub fn lemma_lower_bound_test(p: &UniPoly, eps: f64, n_x: usize) -> Result<LemmaOutcome> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Precondition(format!("epsilon = {eps} must lie in (0, 1]")));
    }
    if n_x < 2 {
        return Err(Error::Precondition("need at least two grid points".into()));
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let k = p.degree().unwrap_or(0);
    if k > 0 {
        for r in all_roots(p, &RootOptions::default())? {
            if hull_margin(r, eps) <= 0.0 {
                return Err(Error::Precondition(format!(
                    "p vanishes at {r}, inside the hull of B(0, {eps}) and 1"
                )));
            }
        }
    }
    let p1 = p.eval(Complex64::new(1.0, 0.0)).norm();
    let min_ratio = (0..n_x)
        .map(|i| p.eval(Complex64::new(i as f64 / (n_x - 1) as f64, 0.0)).norm() / p1)
        .fold(f64::INFINITY, f64::min);
    let bound = (eps / 2.0).powi(k as i32);
    Ok(LemmaOutcome {
        min_ratio,
        bound,
        holds: min_ratio >= bound,
    })
}

/// A random polynomial of degree `<= max_degree` with all roots outside the
/// hull of `B(0, eps)` and `{1}`, with `eps` drawn from `[0.05, 0.95]`.
pub fn random_admissible_instance<R: Rng + ?Sized>(rng: &mut R, max_degree: usize) -> (UniPoly, f64) {
    let eps = rng.random_range(0.05..0.95);
    let k = rng.random_range(0..=max_degree);
    let mut roots = Vec::with_capacity(k);
    while roots.len() < k {
        let z = Complex64::from_polar(rng.random_range(0.0..3.0), rng.random_range(0.0..TAU));
        if hull_margin(z, eps) > 1e-3 {
            roots.push(z);
        }
    }
    let lead = Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..TAU));
    (UniPoly::from_roots(lead, &roots), eps)
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    proptest! {
        #[test]
        fn hull_margin_sign(re in -3.0..3.0f64, im in -3.0..3.0f64, eps in 0.05..1.0f64) {
            let z = Complex64::new(re, im);
            let m = hull_margin(z, eps);
            if z.norm() < eps {
                prop_assert!(m <= 1e-9);
            }
            if z.re < -eps || z.re > 1.0 + 1e-9 || z.im.abs() > eps {
                prop_assert!(m > 0.0);
            }
        }

        #[test]
        fn admissible_instances_satisfy_bound(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (p, eps) = random_admissible_instance(&mut rng, 5);
            prop_assert!(lemma_lower_bound_test(&p, eps, 2000).unwrap().holds);
        }
    }
}
