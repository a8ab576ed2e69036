//! Named rational inner functions used throughout the tests, the examples and
//! the `--phi name:<...>` CLI shorthand.

use num_complex::Complex64;

use crate::clark::RationalInnerFn;
use crate::error::{Error, Result};
use crate::poly::MultiPoly;

fn poly(nvars: usize, terms: &[(&[u32], f64)]) -> MultiPoly {
    MultiPoly::from_real_terms(nvars, terms).expect("catalog literal")
}

/// The coordinate function `z_{j+1}` on the n-disc.
pub fn coordinate(n: usize, j: usize) -> RationalInnerFn {
    RationalInnerFn::polydisc(MultiPoly::var(n, j), MultiPoly::one(n)).expect("coordinate is inner")
}

pub fn z1(n: usize) -> RationalInnerFn {
    coordinate(n, 0)
}

pub fn z2() -> RationalInnerFn {
    coordinate(2, 1)
}

pub fn z1z2() -> RationalInnerFn {
    RationalInnerFn::polydisc(poly(2, &[(&[1, 1], 1.0)]), MultiPoly::one(2)).expect("z1 z2 is inner")
}

pub fn z1sq_z2() -> RationalInnerFn {
    RationalInnerFn::polydisc(poly(2, &[(&[2, 1], 1.0)]), MultiPoly::one(2)).expect("z1^2 z2 is inner")
}

/// `(2 z1 z2 - z1 - z2) / (2 - z1 - z2)`, with a singular point at (1, 1).
pub fn rif11() -> RationalInnerFn {
    RationalInnerFn::polydisc(
        poly(2, &[(&[1, 1], 2.0), (&[1, 0], -1.0), (&[0, 1], -1.0)]),
        poly(2, &[(&[0, 0], 2.0), (&[1, 0], -1.0), (&[0, 1], -1.0)]),
    )
    .expect("degree-(1,1) RIF is inner")
}

/// `z1 (z2 - a) / (1 - conj(a) z2)` for real `a` with `|a| < 1`.
pub fn z1_blaschke(a: f64) -> RationalInnerFn {
    RationalInnerFn::polydisc(
        poly(2, &[(&[1, 1], 1.0), (&[1, 0], -a)]),
        poly(2, &[(&[0, 0], 1.0), (&[0, 1], -a)]),
    )
    .expect("z1 times a Blaschke factor is inner")
}

/// `(ad - bc - d) / (1 - a)` on the 2x2 matrix ball.
pub fn phi_i22() -> RationalInnerFn {
    RationalInnerFn::matrix_ball(
        poly(4, &[(&[1, 0, 0, 1], 1.0), (&[0, 1, 1, 0], -1.0), (&[0, 0, 0, 1], -1.0)]),
        poly(4, &[(&[0, 0, 0, 0], 1.0), (&[1, 0, 0, 0], -1.0)]),
    )
    .expect("phi_i22 is inner")
}

/// The determinant `ad - bc` on the 2x2 matrix ball.
pub fn det_2x2() -> RationalInnerFn {
    RationalInnerFn::matrix_ball(
        poly(4, &[(&[1, 0, 0, 1], 1.0), (&[0, 1, 1, 0], -1.0)]),
        MultiPoly::one(4),
    )
    .expect("det is inner")
}

/// Blaschke parameter used for the `z1_blaschke` entry of the density corpus.
pub const CORPUS_BLASCHKE_A: f64 = 0.2;

/// The bivariate corpus on which the density decision is exercised.
pub fn density_corpus() -> Vec<(&'static str, RationalInnerFn)> {
    vec![
        ("z1", z1(2)),
        ("z2", z2()),
        ("z1z2", z1z2()),
        ("z1^2z2", z1sq_z2()),
        ("rif11", rif11()),
        ("z1_blaschke", z1_blaschke(CORPUS_BLASCHKE_A)),
    ]
}

pub fn alpha_from_angle(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// Looks up a catalog entry by name.
pub fn by_name(name: &str) -> Result<RationalInnerFn> {
    Ok(match name {
        "z1" => z1(2),
        "z2" => z2(),
        "z1z2" => z1z2(),
        "z1^2z2" | "z1sq_z2" => z1sq_z2(),
        "rif11" => rif11(),
        "z1_blaschke" => z1_blaschke(CORPUS_BLASCHKE_A),
        "phi_i22" => phi_i22(),
        "det" => det_2x2(),
        other => {
            return Err(Error::Config(format!(
                "unknown catalog function '{other}' (known: z1, z2, z1z2, z1sq_z2, rif11, z1_blaschke, phi_i22, det)"
            )))
        }
    })
}
