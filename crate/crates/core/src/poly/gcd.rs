//! Numerical GCD of univariate polynomials through the singular values of the
//! Sylvester matrix, and the content of a bivariate polynomial in one
//! variable built on top of it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{MultiPoly, UniPoly};
use crate::error::{Error, Result};

pub const DEFAULT_TOL_RANK: f64 = 1e-8;

/// Matrix of `v -> a * v` for `v` of degree `< cols`.
fn convolution_matrix(a: &[Complex64], cols: usize) -> DMatrix<Complex64> {
    let rows = a.len() + cols - 1;
    let mut m = DMatrix::zeros(rows, cols);
    for j in 0..cols {
        for (i, c) in a.iter().enumerate() {
            m[(i + j, j)] = *c;
        }
    }
    m
}

fn sylvester(a: &[Complex64], b: &[Complex64]) -> DMatrix<Complex64> {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let mut s = DMatrix::zeros(m + n, m + n);
    s.columns_mut(0, n).copy_from(&convolution_matrix(a, n));
    s.columns_mut(n, m).copy_from(&convolution_matrix(b, m));
    s
}

fn normalized(p: &UniPoly) -> Vec<Complex64> {
    let nrm = p.norm();
    p.coeffs().iter().map(|c| c / nrm).collect()
}

/// Approximate greatest common divisor.
///
/// The GCD degree is the number of Sylvester singular values below
/// `tol_rank` times the largest one. The factor itself is recovered from the
/// null vector of the degree-`d` subresultant system `a*v = b*u` followed by
/// a least-squares division `a / u`. The result is monic.
pub fn approx_gcd(a: &UniPoly, b: &UniPoly, tol_rank: f64) -> Result<UniPoly> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (m, n) = (a.degree().unwrap(), b.degree().unwrap());
    if m == 0 || n == 0 {
        return Ok(UniPoly::one());
    }
    let an = normalized(a);
    let bn = normalized(b);
    let sv = sylvester(&an, &bn).singular_values();
    let smax = sv.max();
    let d = sv.iter().filter(|&&s| s < tol_rank * smax).count();
    if d == 0 {
        return Ok(UniPoly::one());
    }
    let d = d.min(m).min(n);

    // [C_{n-d+1}(a) | -C_{m-d+1}(b)] [v; u] = 0 with deg v = n-d, deg u = m-d.
    let ca = convolution_matrix(&an, n - d + 1);
    let cb = convolution_matrix(&bn, m - d + 1);
    let mut t = DMatrix::zeros(ca.nrows(), ca.ncols() + cb.ncols());
    t.columns_mut(0, ca.ncols()).copy_from(&ca);
    t.columns_mut(ca.ncols(), cb.ncols()).copy_from(&(-cb));
    let svd = t.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    let null: Vec<Complex64> = v_t.row(imin).iter().map(|c| c.conj()).collect();
    let u: Vec<Complex64> = null[n - d + 1..].to_vec();

    // a = u * g in the least-squares sense.
    let cu = convolution_matrix(&u, d + 1);
    let rhs = DVector::from_column_slice(&an);
    let g = cu
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Precondition(format!("GCD division failed: {e}")))?;
    let g = UniPoly::new(g.iter().copied().collect());
    if g.degree() != Some(d) {
        return Ok(UniPoly::one());
    }
    Ok(g.monic())
}

/// Content of a bivariate polynomial `h` viewed in `C[z'][z_j]`: the GCD of
/// its coefficient polynomials, which live in the other variable. Returned
/// monic, embedded as a polynomial in two variables.
pub fn content_in_variable(h: &MultiPoly, j: usize, tol_rank: f64) -> Result<MultiPoly> {
    if h.nvars() != 2 {
        return Err(Error::Unsupported(format!(
            "content is implemented for bivariate polynomials only (got {} variables)",
            h.nvars()
        )));
    }
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let other = 1 - j.min(1);
    if j > 1 {
        return Err(Error::VariableOutOfRange { index: j, nvars: 2 });
    }
    let coeffs: Vec<UniPoly> = h
        .coefficients_in(j)?
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.to_unipoly_in(other))
        .collect::<Result<_>>()?;
    let mut g = coeffs[0].monic();
    for c in &coeffs[1..] {
        if g.degree() == Some(0) {
            break;
        }
        g = approx_gcd(&g, c, tol_rank)?;
    }
    Ok(MultiPoly::from_unipoly(2, other, &g.monic()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close_up_to_scalar(a: &UniPoly, b: &UniPoly, tol: f64) -> bool {
        a.degree() == b.degree() && (&a.monic() - &b.monic()).norm() <= tol
    }

    #[test]
    fn synthetic_common_factor() {
        let a = UniPoly::from_roots(c(1.0, 0.0), &[c(1.0, 0.0), c(2.0, 0.0)]);
        let b = UniPoly::from_roots(c(1.0, 0.0), &[c(1.0, 0.0), c(3.0, 0.0)]);
        let g = approx_gcd(&a, &b, DEFAULT_TOL_RANK).unwrap();
        // Exact GCD at these integer coefficients is w - 1.
        assert!(close_up_to_scalar(&g, &UniPoly::from_real(&[-1.0, 1.0]), 1e-10), "{g:?}");
    }

    #[test]
    fn coprime_gives_one() {
        let g = approx_gcd(&UniPoly::from_real(&[-1.0, 1.0]), &UniPoly::from_real(&[1.0, 1.0]), DEFAULT_TOL_RANK)
            .unwrap();
        assert_eq!(g, UniPoly::one());
    }

    #[test]
    fn self_gcd() {
        let w2 = UniPoly::from_real(&[0.0, 0.0, 1.0]);
        let g = approx_gcd(&w2, &w2, DEFAULT_TOL_RANK).unwrap();
        assert!(close_up_to_scalar(&g, &w2, 1e-10), "{g:?}");
    }

    #[test]
    fn constants_give_one() {
        let g = approx_gcd(&UniPoly::from_real(&[2.0]), &UniPoly::from_real(&[1.0, 1.0]), DEFAULT_TOL_RANK).unwrap();
        assert_eq!(g, UniPoly::one());
        assert!(approx_gcd(&UniPoly::zero(), &UniPoly::one(), DEFAULT_TOL_RANK).is_err());
    }

    #[test]
    fn content_examples() {
        // (z2 - 1)(z1 + z2)
        let h = MultiPoly::from_real_terms(2, &[(&[1, 1], 1.0), (&[1, 0], -1.0), (&[0, 2], 1.0), (&[0, 1], -1.0)])
            .unwrap();
        let g = content_in_variable(&h, 0, DEFAULT_TOL_RANK).unwrap();
        let want = MultiPoly::from_real_terms(2, &[(&[0, 1], 1.0), (&[0, 0], -1.0)]).unwrap();
        assert!((&g - &want).l1_norm() < 1e-10, "{g}");

        let alpha = Complex64::from_polar(1.0, 0.3);
        let h = &MultiPoly::var(2, 0) - &MultiPoly::constant(2, alpha);
        assert_eq!(content_in_variable(&h, 0, DEFAULT_TOL_RANK).unwrap(), MultiPoly::one(2));

        // z2 z1 + z2 = z2 (z1 + 1)
        let h = MultiPoly::from_real_terms(2, &[(&[1, 1], 1.0), (&[0, 1], 1.0)]).unwrap();
        assert_eq!(content_in_variable(&h, 0, DEFAULT_TOL_RANK).unwrap(), MultiPoly::var(2, 1));
    }

    #[test]
    fn content_rejects_zero_and_higher_dimensions() {
        assert!(content_in_variable(&MultiPoly::zero(2), 0, DEFAULT_TOL_RANK).is_err());
        assert!(matches!(
            content_in_variable(&MultiPoly::var(3, 0), 0, DEFAULT_TOL_RANK),
            Err(Error::Unsupported(_))
        ));
    }
}
