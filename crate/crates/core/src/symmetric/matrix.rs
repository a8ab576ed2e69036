use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

/// A 2x2 complex matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MatrixPoint {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MatrixPoint {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::default();
        Self::new(one, zero, zero, one)
    }

    pub fn from_slice(z: &[Complex64]) -> Self {
        Self::new(z[0], z[1], z[2], z[3])
    }

    /// Row-major coordinates `(a, b, c, d)`.
    pub fn to_vec(&self) -> Vec<Complex64> {
        vec![self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// Frobenius norm of `M* M - I`.
    pub fn unitarity_residual(&self) -> f64 {
        let g = self.adjoint().mul(self);
        let one = Complex64::new(1.0, 0.0);
        ((g.a - one).norm_sqr() + g.b.norm_sqr() + g.c.norm_sqr() + (g.d - one).norm_sqr()).sqrt()
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed element of U(2): Gram–Schmidt QR of a standard complex
/// Gaussian matrix, with the phases of R's diagonal moved into Q.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R) -> MatrixPoint {
    let (x11, x21, x12, x22) = (gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng));
    // First column.
    let r11 = (x11.norm_sqr() + x21.norm_sqr()).sqrt();
    let (q11, q21) = (x11 / r11, x21 / r11);
    // Second column, orthogonalized against the first.
    let r12 = q11.conj() * x12 + q21.conj() * x22;
    let (v1, v2) = (x12 - q11 * r12, x22 - q21 * r12);
    let r22 = (v1.norm_sqr() + v2.norm_sqr()).sqrt();
    let (q12, q22) = (v1 / r22, v2 / r22);
    // Gram–Schmidt yields a real positive diagonal in R already, which is the
    // phase normalization that makes Q Haar distributed. One re-orthogonalization
    // pass keeps the unitarity residual at rounding level.
    let m = MatrixPoint::new(q11, q12, q21, q22);
    reorthonormalize(&m)
}

fn reorthonormalize(m: &MatrixPoint) -> MatrixPoint {
    let n1 = (m.a.norm_sqr() + m.c.norm_sqr()).sqrt();
    let (a, c) = (m.a / n1, m.c / n1);
    let proj = a.conj() * m.b + c.conj() * m.d;
    let (b, d) = (m.b - a * proj, m.d - c * proj);
    let n2 = (b.norm_sqr() + d.norm_sqr()).sqrt();
    MatrixPoint::new(a, b / n2, c, d / n2)
}

/// The `index`-th Haar sample of the stream identified by `seed`.
///
/// Each sample draws from its own ChaCha stream (`stream = index`), so the
/// sequence depends only on `(seed, index)` and not on how work is split
/// across threads.
pub fn haar_sample(seed: u64, index: u64) -> MatrixPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    haar_unitary(&mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_unitary() {
        for i in 0..1000 {
            let u = haar_sample(7, i);
            assert!(u.unitarity_residual() <= 1e-12, "{}", u.unitarity_residual());
            assert!((u.det().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn samples_depend_only_on_seed_and_index() {
        assert_eq!(haar_sample(3, 41), haar_sample(3, 41));
        assert_ne!(haar_sample(3, 41), haar_sample(3, 42));
        assert_ne!(haar_sample(3, 41), haar_sample(4, 41));
    }

    #[test]
    fn identity_and_products() {
        let u = haar_sample(1, 2);
        assert_eq!(MatrixPoint::identity().mul(&u), u);
        assert!(u.adjoint().mul(&u).unitarity_residual() < 1e-12);
    }
}
