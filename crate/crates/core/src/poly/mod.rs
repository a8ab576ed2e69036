//! Sparse multivariate and dense univariate polynomials with complex
//! coefficients, plus the numerical kernels built on them (roots on the unit
//! circle, approximate GCD, content in one variable).

mod gcd;
mod literal;
mod roots;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use gcd::{approx_gcd, content_in_variable, DEFAULT_TOL_RANK};
pub use literal::{PolyLiteral, TermLiteral};
pub use roots::{all_roots, roots_on_circle, roots_on_circle_with, CircleRoots, RootOptions, DEFAULT_TOL_CIRCLE};

/// Coefficients with magnitude below this are dropped on normalization.
pub const COEFF_FLOOR: f64 = 1e-14;

/// Exponent multi-index; its length is the number of variables.
pub type Exponent = Vec<u32>;

/// Sparse polynomial in `nvars` complex variables.
///
/// Terms are kept in a `BTreeMap` so iteration order (and therefore every
/// summation performed over the terms) is deterministic.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Complex64>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Complex64::new(1.0, 0.0))
    }

    /// The coordinate function `z_j` (0-based `j`).
    pub fn var(nvars: usize, j: usize) -> Self {
        let mut exp = vec![0; nvars];
        exp[j] = 1;
        Self::monomial(nvars, exp, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(nvars: usize, exp: Exponent, c: Complex64) -> Self {
        assert_eq!(exp.len(), nvars, "exponent length must equal nvars");
        let mut p = Self::zero(nvars);
        if c.norm() >= COEFF_FLOOR {
            p.terms.insert(exp, c);
        }
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// repeated exponents.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Complex64)>,
    {
        let mut map: BTreeMap<Exponent, Complex64> = BTreeMap::new();
        for (exp, c) in terms {
            if exp.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: exp.len(),
                });
            }
            *map.entry(exp).or_default() += c;
        }
        let mut p = Self { nvars, terms: map };
        p.normalize();
        Ok(p)
    }

    /// Convenience constructor from real coefficients.
    pub fn from_real_terms(nvars: usize, terms: &[(&[u32], f64)]) -> Result<Self> {
        Self::from_terms(
            nvars,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), Complex64::new(*c, 0.0))),
        )
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| c.norm() >= COEFF_FLOOR);
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &[u32]) -> Complex64 {
        self.terms.get(exp).copied().unwrap_or_default()
    }

    /// Maximum total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in the single variable `j`, `None` for the zero polynomial.
    pub fn degree_in(&self, j: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[j]).max()
    }

    /// Sum of coefficient magnitudes; used as a scale for residual tests.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        };
        out.normalize();
        out
    }

    fn check_point(&self, z: &[Complex64]) -> Result<()> {
        if z.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: z.len(),
            });
        }
        Ok(())
    }

    fn check_var(&self, j: usize) -> Result<()> {
        if j >= self.nvars {
            return Err(Error::VariableOutOfRange {
                index: j,
                nvars: self.nvars,
            });
        }
        Ok(())
    }

    /// Evaluates the polynomial at `z`.
    ///
    /// Powers of each coordinate are tabulated once, then terms are
    /// accumulated in exponent order.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        self.check_point(z)?;
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: &[Complex64]) -> Complex64 {
        if self.terms.is_empty() {
            return Complex64::default();
        }
        let powers: Vec<Vec<Complex64>> = (0..self.nvars)
            .map(|j| {
                let d = self.degree_in(j).unwrap_or(0) as usize;
                let mut pw = Vec::with_capacity(d + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                for _ in 0..=d {
                    pw.push(acc);
                    acc *= z[j];
                }
                pw
            })
            .collect();
        let mut sum = Complex64::default();
        for (exp, c) in &self.terms {
            let mut t = *c;
            for (j, &e) in exp.iter().enumerate() {
                if e > 0 {
                    t *= powers[j][e as usize];
                }
            }
            sum += t;
        }
        sum
    }

    /// Partial derivative with respect to `z_j`.
    pub fn partial(&self, j: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (exp, c) in &self.terms {
            if exp[j] == 0 {
                continue;
            }
            let mut e = exp.clone();
            let k = e[j];
            e[j] -= 1;
            *out.terms.entry(e).or_default() += c * k as f64;
        }
        out.normalize();
        out
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|j| self.partial(j)).collect()
    }

    /// Splits `p = p1 + z_j * p2`, where `p1` does not involve `z_j`.
    pub fn split_in_variable(&self, j: usize) -> Result<(Self, Self)> {
        self.check_var(j)?;
        let mut p1 = Self::zero(self.nvars);
        let mut p2 = Self::zero(self.nvars);
        for (exp, c) in &self.terms {
            if exp[j] == 0 {
                p1.terms.insert(exp.clone(), *c);
            } else {
                let mut e = exp.clone();
                e[j] -= 1;
                p2.terms.insert(e, *c);
            }
        }
        Ok((p1, p2))
    }

    /// Coefficients of `p` viewed as a polynomial in `z_j`: entry `k` is the
    /// coefficient of `z_j^k`, itself a polynomial free of `z_j`.
    pub fn coefficients_in(&self, j: usize) -> Result<Vec<Self>> {
        self.check_var(j)?;
        let d = self.degree_in(j).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(self.nvars); d + 1];
        for (exp, c) in &self.terms {
            let k = exp[j] as usize;
            let mut e = exp.clone();
            e[j] = 0;
            out[k].terms.insert(e, *c);
        }
        Ok(out)
    }

    /// The one-variable polynomial `w -> p(w * zeta)`.
    pub fn restrict_to_fiber(&self, zeta: &[Complex64]) -> Result<UniPoly> {
        self.check_point(zeta)?;
        let deg = self.degree().unwrap_or(0) as usize;
        let mut coeffs = vec![Complex64::default(); deg + 1];
        for (exp, c) in &self.terms {
            let k: u32 = exp.iter().sum();
            let mut t = *c;
            for (j, &e) in exp.iter().enumerate() {
                if e > 0 {
                    t *= zeta[j].powu(e);
                }
            }
            coeffs[k as usize] += t;
        }
        Ok(UniPoly::new(coeffs))
    }

    /// Fixes every coordinate except `z_j` at `point` and returns the
    /// resulting polynomial in `z_j`; `point[j]` is ignored.
    pub fn substitute_except(&self, j: usize, point: &[Complex64]) -> Result<UniPoly> {
        self.check_var(j)?;
        self.check_point(point)?;
        let deg = self.degree_in(j).unwrap_or(0) as usize;
        let mut coeffs = vec![Complex64::default(); deg + 1];
        for (exp, c) in &self.terms {
            let mut t = *c;
            for (i, &e) in exp.iter().enumerate() {
                if i != j && e > 0 {
                    t *= point[i].powu(e);
                }
            }
            coeffs[exp[j] as usize] += t;
        }
        Ok(UniPoly::new(coeffs))
    }

    /// Converts a polynomial that only involves `z_j` into a `UniPoly`.
    pub fn to_unipoly_in(&self, j: usize) -> Result<UniPoly> {
        self.check_var(j)?;
        let deg = self.degree_in(j).unwrap_or(0) as usize;
        let mut coeffs = vec![Complex64::default(); deg + 1];
        for (exp, c) in &self.terms {
            if exp.iter().enumerate().any(|(i, &e)| i != j && e > 0) {
                return Err(Error::Precondition(format!(
                    "polynomial involves variables other than z{}",
                    j + 1
                )));
            }
            coeffs[exp[j] as usize] += c;
        }
        Ok(UniPoly::new(coeffs))
    }

    /// Embeds a univariate polynomial as a polynomial in `z_j` of `nvars`
    /// variables.
    pub fn from_unipoly(nvars: usize, j: usize, u: &UniPoly) -> Self {
        let mut p = Self::zero(nvars);
        for (k, c) in u.coeffs().iter().enumerate() {
            let mut e = vec![0; nvars];
            e[j] = k as u32;
            p.terms.insert(e, *c);
        }
        p.normalize();
        p
    }

    /// Indices of variables that occur in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&j| self.terms.keys().any(|e| e[j] > 0))
            .collect()
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            *out.terms.entry(e.clone()).or_default() += c;
        }
        out.normalize();
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            *out.terms.entry(e.clone()).or_default() -= c;
        }
        out.normalize();
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *out.terms.entry(e).or_default() += ca * cb;
            }
        }
        out.normalize();
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

fn fmt_coeff(c: &Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = exp
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| {
                    if e == 1 {
                        format!("z{}", j + 1)
                    } else {
                        format!("z{}^{}", j + 1, e)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", fmt_coeff(c))?;
            } else if *c == Complex64::new(1.0, 0.0) {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_coeff(c), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Dense univariate polynomial, coefficients in ascending degree.
///
/// Trailing coefficients that are negligible relative to the largest one are
/// trimmed, so the leading coefficient is nonzero unless the polynomial is
/// zero.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Complex64>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let floor = (max * COEFF_FLOOR).max(f64::MIN_POSITIVE);
        while coeffs.last().is_some_and(|c| c.norm() < floor) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self {
            coeffs: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// `lead * prod (w - r)` over the given roots.
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Self {
        let mut p = Self::new(vec![lead]);
        for r in roots {
            p = &p * &Self::new(vec![-r, Complex64::new(1.0, 0.0)]);
        }
        p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::default(), |acc, c| acc * w + c)
    }

    /// Value and first derivative at `w` by a single Horner pass.
    pub fn eval_with_derivative(&self, w: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::default();
        let mut dp = Complex64::default();
        for c in self.coeffs.iter().rev() {
            dp = dp * w + p;
            p = p * w + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Scaled so that the leading coefficient is 1. The zero polynomial is
    /// returned unchanged.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.leading().inv())
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or_default()
                        + rhs.coeffs.get(k).copied().unwrap_or_default()
                })
                .collect(),
        )
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or_default()
                        - rhs.coeffs.get(k).copied().unwrap_or_default()
                })
                .collect(),
        )
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Complex64::default(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z1z2() -> MultiPoly {
        MultiPoly::from_real_terms(2, &[(&[1, 1], 1.0)]).unwrap()
    }

    fn two_minus() -> MultiPoly {
        MultiPoly::from_real_terms(2, &[(&[0, 0], 2.0), (&[1, 0], -1.0), (&[0, 1], -1.0)]).unwrap()
    }

    // Term-by-term oracle: sum of c * prod z_j^e_j with powi, independent of
    // the tabulated-powers path in `eval`.
    fn eval_oracle(p: &MultiPoly, z: &[Complex64]) -> Complex64 {
        p.terms()
            .map(|(e, c)| {
                e.iter()
                    .zip(z)
                    .fold(*c, |acc, (&k, zj)| acc * zj.powi(k as i32))
            })
            .sum()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(z1z2().eval(&[c(0.0, 1.0), c(0.0, 1.0)]).unwrap(), c(-1.0, 0.0));
        assert_eq!(two_minus().eval(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap(), c(0.0, 0.0));
        let p = MultiPoly::from_real_terms(2, &[(&[2, 1], 1.0), (&[0, 0], 3.0)]).unwrap();
        let z = [c(2.0, 0.0), c(1.0, 0.0)];
        assert_eq!(eval_oracle(&p, &z), c(7.0, 0.0));
        assert_eq!(p.eval(&z).unwrap(), c(7.0, 0.0));
    }

    #[test]
    fn eval_rejects_wrong_dimension() {
        assert!(matches!(
            z1z2().eval(&[c(1.0, 0.0)]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn gradient_examples() {
        let g = z1z2().gradient();
        assert_eq!(g[0], MultiPoly::var(2, 1));
        assert_eq!(g[1], MultiPoly::var(2, 0));
        let k = MultiPoly::constant(2, c(5.0, 1.0)).gradient();
        assert!(k.iter().all(MultiPoly::is_zero));
        let cube = MultiPoly::from_real_terms(2, &[(&[3, 0], 1.0)]).unwrap().gradient();
        assert_eq!(cube[0], MultiPoly::from_real_terms(2, &[(&[2, 0], 3.0)]).unwrap());
        assert!(cube[1].is_zero());
    }

    #[test]
    fn split_examples() {
        let (p1, p2) = two_minus().split_in_variable(0).unwrap();
        assert_eq!(p1, MultiPoly::from_real_terms(2, &[(&[0, 0], 2.0), (&[0, 1], -1.0)]).unwrap());
        assert_eq!(p2, MultiPoly::constant(2, c(-1.0, 0.0)));

        let (p1, p2) = z1z2().split_in_variable(0).unwrap();
        assert!(p1.is_zero());
        assert_eq!(p2, MultiPoly::var(2, 1));

        let p = MultiPoly::from_real_terms(2, &[(&[2, 0], 1.0), (&[1, 1], 1.0), (&[0, 2], 1.0)]).unwrap();
        let (p1, p2) = p.split_in_variable(0).unwrap();
        assert_eq!(p1, MultiPoly::from_real_terms(2, &[(&[0, 2], 1.0)]).unwrap());
        assert_eq!(p2, MultiPoly::from_real_terms(2, &[(&[1, 0], 1.0), (&[0, 1], 1.0)]).unwrap());
        let back = &p1 + &(&MultiPoly::var(2, 0) * &p2);
        assert!((&back - &p).is_zero());

        assert!(matches!(p.split_in_variable(2), Err(Error::VariableOutOfRange { .. })));
    }

    #[test]
    fn restrict_examples() {
        let e = c(0.3f64.cos(), 0.3f64.sin());
        let u = MultiPoly::var(2, 0).restrict_to_fiber(&[c(1.0, 0.0), e]).unwrap();
        assert_eq!(u.coeffs(), &[c(0.0, 0.0), c(1.0, 0.0)]);

        let u = z1z2().restrict_to_fiber(&[c(1.0, 0.0), e]).unwrap();
        assert_eq!(u.degree(), Some(2));
        assert!((u.coeffs()[2] - e).norm() < 1e-15);

        // cancellation: w-coefficient -1 - (-1) vanishes, leaving the constant 2
        let zeta = [c(1.0, 0.0), c(-1.0, 0.0)];
        let u = two_minus().restrict_to_fiber(&zeta).unwrap();
        assert_eq!(u.coeffs(), &[c(2.0, 0.0)]);
        for k in 0..16 {
            let w = Complex64::from_polar(1.0, k as f64 * 0.4);
            let direct = two_minus().eval(&[w * zeta[0], w * zeta[1]]).unwrap();
            assert!((direct - u.eval(w)).norm() < 1e-14);
        }
    }

    #[test]
    fn coefficients_in_variable() {
        // (z2 - 1)(z1 + z2) = z1 z2 - z1 + z2^2 - z2
        let h = MultiPoly::from_real_terms(2, &[(&[1, 1], 1.0), (&[1, 0], -1.0), (&[0, 2], 1.0), (&[0, 1], -1.0)])
            .unwrap();
        let cs = h.coefficients_in(0).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[1], MultiPoly::from_real_terms(2, &[(&[0, 1], 1.0), (&[0, 0], -1.0)]).unwrap());
        let u = cs[0].to_unipoly_in(1).unwrap();
        assert_eq!(u, UniPoly::from_real(&[0.0, -1.0, 1.0]));
    }

    #[test]
    fn floor_drops_dust() {
        let p = MultiPoly::from_terms(1, vec![(vec![0], c(1e-16, 0.0)), (vec![1], c(1.0, 0.0))]).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(MultiPoly::zero(3).degree(), None);
    }

    #[test]
    fn unipoly_trim_and_ops() {
        let p = UniPoly::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(1e-20, 0.0)]);
        assert_eq!(p.degree(), Some(1));
        let r = UniPoly::from_roots(c(2.0, 0.0), &[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(r, UniPoly::from_real(&[-2.0, 0.0, 2.0]));
        let (v, d) = r.eval_with_derivative(c(3.0, 0.0));
        assert_eq!(v, c(16.0, 0.0));
        assert_eq!(d, r.derivative().eval(c(3.0, 0.0)));
        assert_eq!(r.monic().leading(), c(1.0, 0.0));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(two_minus().to_string(), "2 + -1*z2 + -1*z1");
        assert_eq!(z1z2().to_string(), "z1*z2");
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;

    fn complex_in(r: f64) -> impl Strategy<Value = Complex64> {
        (-r..r, -r..r).prop_map(|(a, b)| Complex64::new(a, b))
    }

    fn bivariate() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(((0u32..4, 0u32..4), complex_in(2.0)), 1..8)
            .prop_map(|t| MultiPoly::from_terms(2, t.into_iter().map(|((a, b), z)| (vec![a, b], z))).unwrap())
    }

    fn point() -> impl Strategy<Value = Vec<Complex64>> {
        (complex_in(0.9), complex_in(0.9)).prop_map(|(a, b)| vec![a, b])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gradient_matches_differences(p in bivariate(), z in point()) {
            let h = 1e-6;
            for (j, dp) in p.gradient().iter().enumerate() {
                let (mut hi, mut lo) = (z.clone(), z.clone());
                hi[j] += h;
                lo[j] -= h;
                let fd = (p.eval(&hi).unwrap() - p.eval(&lo).unwrap()) / (2.0 * h);
                let exact = dp.eval(&z).unwrap();
                prop_assert!((fd - exact).norm() <= 1e-6 * (1.0 + p.l1_norm()), "{fd} vs {exact}");
            }
        }

        #[test]
        fn fiber_restriction_commutes(p in bivariate(), z in point(), w in complex_in(1.0)) {
            let u = p.restrict_to_fiber(&z).unwrap();
            let direct = p.eval(&[w * z[0], w * z[1]]).unwrap();
            prop_assert!((u.eval(w) - direct).norm() <= 1e-12 * (1.0 + p.l1_norm()));
        }

        #[test]
        fn split_reconstructs(p in bivariate(), z in point(), j in 0usize..2) {
            let (p1, p2) = p.split_in_variable(j).unwrap();
            prop_assert_eq!(p1.degree_in(j).unwrap_or(0), 0);
            let rebuilt = p1.eval(&z).unwrap() + z[j] * p2.eval(&z).unwrap();
            prop_assert!((rebuilt - p.eval(&z).unwrap()).norm() <= 1e-12 * (1.0 + p.l1_norm()));
        }
    }
}
