use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::clark::{DomainKind, SampledClarkMeasure};
use crate::error::{Error, Result};
use crate::sum::sum_real;

/// Eigenvalues below this fraction of the largest are dropped.
pub const SPECTRAL_CUTOFF: f64 = 1e-10;
/// Allowed negative eigenvalue, relative to the largest.
pub const PSD_TOL: f64 = 1e-10;
const CHUNK: usize = 512;

const MATRIX_ENTRIES: [&str; 4] = ["a", "b", "c", "d"];

/// The conjugate of coordinate `j` (0-based); on the matrix ball the
/// coordinates are the entries `a, b, c, d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Target {
    pub j: usize,
}

impl Target {
    pub fn conj(j: usize) -> Self {
        Self { j }
    }

    pub fn label(&self, domain: DomainKind) -> String {
        match domain {
            DomainKind::Polydisc => format!("conj(z{})", self.j + 1),
            DomainKind::MatrixBall2x2 => format!("conj({})", MATRIX_ENTRIES.get(self.j).unwrap_or(&"?")),
        }
    }

    fn value(&self, z: &[Complex64]) -> Complex64 {
        z[self.j].conj()
    }
}

/// Least-squares fit of a target by holomorphic monomials in `L^2(mu_alpha)`.
#[derive(Clone, Debug, Serialize)]
pub struct GramSystem {
    pub target: String,
    #[serde(rename = "N")]
    pub degree: u32,
    pub basis: Vec<Vec<u32>>,
    #[serde(skip)]
    pub gram: DMatrix<Complex64>,
    #[serde(skip)]
    pub moments: DVector<Complex64>,
    #[serde(skip)]
    pub coefficients: DVector<Complex64>,
    /// Number of eigenvalues kept by the spectral cutoff.
    pub rank: usize,
    pub min_eig: f64,
    pub max_eig: f64,
    /// `|| target - best fit ||` in `L^2(mu_alpha)`.
    pub residual: f64,
}

/// Box-degree monomials on the polydisc, total-degree monomials on the
/// matrix ball, sorted by box degree and then total degree.
pub fn monomial_basis(domain: DomainKind, nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut exp = vec![0u32; nvars];
    loop {
        let keep = match domain {
            DomainKind::Polydisc => true,
            DomainKind::MatrixBall2x2 => exp.iter().sum::<u32>() <= degree,
        };
        if keep {
            out.push(exp.clone());
        }
        // Odometer over the box [0, degree]^nvars.
        let mut i = 0;
        loop {
            if i == nvars {
                out.sort_by_key(|e| (e.iter().copied().max().unwrap_or(0), e.iter().sum::<u32>(), e.clone()));
                return out;
            }
            if exp[i] < degree {
                exp[i] += 1;
                break;
            }
            exp[i] = 0;
            i += 1;
        }
    }
}

fn monomial_row(z: &[Complex64], basis: &[Vec<u32>], degree: u32) -> Vec<Complex64> {
    let powers: Vec<Vec<Complex64>> = z
        .iter()
        .map(|&c| {
            let mut p = Vec::with_capacity(degree as usize + 1);
            let mut acc = Complex64::new(1.0, 0.0);
            for _ in 0..=degree {
                p.push(acc);
                acc *= c;
            }
            p
        })
        .collect();
    basis
        .iter()
        .map(|e| e.iter().enumerate().map(|(v, &k)| powers[v][k as usize]).product())
        .collect()
}

/// Fits every target in `targets` at degree `degree`, sharing one Gram matrix.
pub fn gram_residuals(mu: &SampledClarkMeasure, targets: &[Target], degree: u32) -> Result<Vec<GramSystem>> {
    if degree < 1 {
        return Err(Error::Precondition("degree N must be at least 1".into()));
    }
    let atoms: Vec<(f64, &[Complex64])> = mu.weighted_atoms().filter(|(w, _)| *w > 0.0).collect();
    let Some(nvars) = atoms.first().map(|(_, z)| z.len()) else {
        return Err(Error::Precondition("the measure has no atoms".into()));
    };
    if let Some(t) = targets.iter().find(|t| t.j >= nvars) {
        return Err(Error::VariableOutOfRange { index: t.j, nvars });
    }
    let basis = monomial_basis(mu.domain, nvars, degree);
    let m = basis.len();
    let nt = targets.len();

    // Per-chunk partial sums, combined in chunk order.
    let partials: Vec<(DMatrix<Complex64>, DMatrix<Complex64>)> = atoms
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut a = DMatrix::<Complex64>::zeros(chunk.len(), m);
            let mut t = DMatrix::<Complex64>::zeros(chunk.len(), nt);
            for (r, (w, z)) in chunk.iter().enumerate() {
                let s = w.sqrt();
                for (c, v) in monomial_row(z, &basis, degree).into_iter().enumerate() {
                    a[(r, c)] = v * s;
                }
                for (c, tg) in targets.iter().enumerate() {
                    t[(r, c)] = tg.value(z) * s;
                }
            }
            (a.ad_mul(&a), a.ad_mul(&t))
        })
        .collect();
    let mut gram = DMatrix::<Complex64>::zeros(m, m);
    let mut rhs = DMatrix::<Complex64>::zeros(m, nt);
    for (g, b) in &partials {
        gram += g;
        rhs += b;
    }
    // Symmetrize away rounding asymmetry.
    let gram = (&gram + gram.adjoint()) * Complex64::new(0.5, 0.0);

    let eig = SymmetricEigen::new(gram.clone());
    let max_eig = eig.eigenvalues.max();
    let min_eig = eig.eigenvalues.min();
    if max_eig <= 0.0 || min_eig < -PSD_TOL * max_eig {
        return Err(Error::GramNotPsd { min_eig, max_eig });
    }
    let keep: Vec<usize> = (0..m).filter(|&i| eig.eigenvalues[i] > SPECTRAL_CUTOFF * max_eig).collect();
    let coeffs: Vec<DVector<Complex64>> = (0..nt)
        .map(|c| {
            let b = rhs.column(c);
            let mut x = DVector::<Complex64>::zeros(m);
            for &i in &keep {
                let v = eig.eigenvectors.column(i);
                let proj = v.dotc(&b) / eig.eigenvalues[i];
                x += v * proj;
            }
            x
        })
        .collect();

    // Residuals evaluated directly on the atoms.
    let per_chunk: Vec<Vec<f64>> = atoms
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![Vec::with_capacity(chunk.len()); nt];
            for (w, z) in chunk {
                let row = monomial_row(z, &basis, degree);
                for (c, tg) in targets.iter().enumerate() {
                    let fit: Complex64 = row.iter().zip(coeffs[c].iter()).map(|(a, x)| a * x).sum();
                    acc[c].push(w * (tg.value(z) - fit).norm_sqr());
                }
            }
            acc.into_iter().map(sum_real).collect()
        })
        .collect();

    Ok(targets
        .iter()
        .enumerate()
        .map(|(c, tg)| {
            let sq = sum_real(per_chunk.iter().map(|v| v[c]));
            GramSystem {
                target: tg.label(mu.domain),
                degree,
                basis: basis.clone(),
                gram: gram.clone(),
                moments: rhs.column(c).into_owned(),
                coefficients: coeffs[c].clone(),
                rank: keep.len(),
                min_eig,
                max_eig,
                residual: sq.max(0.0).sqrt(),
            }
        })
        .collect())
}

/// Best `L^2(mu_alpha)` approximation of `target` by monomials of degree `<= N`.
pub fn gram_residual(mu: &SampledClarkMeasure, target: Target, degree: u32) -> Result<GramSystem> {
    Ok(gram_residuals(mu, &[target], degree)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::clark::{assemble_matrix_ball, assemble_polydisc, FiberOptions};

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(monomial_basis(DomainKind::Polydisc, 2, 6).len(), 49);
        assert_eq!(monomial_basis(DomainKind::MatrixBall2x2, 4, 1).len(), 5);
        assert_eq!(monomial_basis(DomainKind::MatrixBall2x2, 4, 6).len(), 210);
        let b = monomial_basis(DomainKind::Polydisc, 2, 1);
        assert_eq!(b[0], vec![0, 0]);
    }

    #[test]
    fn product_exact_fit() {
        let mu = assemble_polydisc(&catalog::z1z2(), one(), 64, 0, &FiberOptions::default()).unwrap();
        let g = gram_residual(&mu, Target::conj(0), 1).unwrap();
        assert!(g.residual <= 1e-6, "{}", g.residual);
        assert!(g.min_eig >= -PSD_TOL * g.max_eig);
    }

    #[test]
    fn coordinate_orthogonal_target() {
        let mu = assemble_polydisc(&catalog::z1(2), Complex64::from_polar(1.0, 1.0), 64, 0, &FiberOptions::default()).unwrap();
        for n in [1, 3, 6] {
            let g = gram_residual(&mu, Target::conj(1), n).unwrap();
            assert!((g.residual.powi(2) - 1.0).abs() < 1e-3, "{}", g.residual);
        }
    }

    #[test]
    fn det_fit_on_matrix_ball() {
        let mu = assemble_matrix_ball(&catalog::det_2x2(), one(), 10_000, 0, &FiberOptions::default()).unwrap();
        let g = gram_residual(&mu, Target::conj(0), 1).unwrap();
        assert!(g.residual <= 1e-2, "{}", g.residual);
        assert_eq!(g.target, "conj(a)");
    }

    #[test]
    fn residual_nonincreasing_in_degree() {
        let mu = assemble_polydisc(&catalog::rif11(), Complex64::i(), 128, 0, &FiberOptions::default()).unwrap();
        let r: Vec<f64> = (1..=5).map(|n| gram_residual(&mu, Target::conj(0), n).unwrap().residual).collect();
        for w in r.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "{r:?}");
        }
    }
}

#[cfg(test)]
mod props {
    use std::f64::consts::TAU;

    use proptest::prelude::*;

    use super::*;
    use crate::catalog;
    use crate::clark::{assemble_polydisc, FiberOptions};

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(6))]

        #[test]
        fn residual_decreases_with_degree(t in 0.0..TAU, seed in 0u64..100) {
            let alpha = Complex64::from_polar(1.0, t);
            let mu = assemble_polydisc(&catalog::rif11(), alpha, 48, seed, &FiberOptions::default()).unwrap();
            let mut last = f64::INFINITY;
            for n in 1..6 {
                let r = gram_residual(&mu, Target::conj(0), n).unwrap().residual;
                prop_assert!(r <= last + 1e-9, "N = {n}: {r} > {last}");
                last = r;
            }
        }
    }
}
