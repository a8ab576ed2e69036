use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::fiber::{check_alpha, fiber_clark_measure, FiberMeasure, FiberOptions};
use super::rif::{DomainKind, RationalInnerFn};
use crate::error::{Error, Result};
use crate::sum::CompensatedSum;
use crate::symmetric::haar_sample;

/// Largest tolerated fraction of skipped fibers.
pub const MAX_SKIPPED_FRACTION: f64 = 1e-3;
pub const MIN_POLYDISC_GRID: usize = 16;
pub const MIN_HAAR_SAMPLES: usize = 1000;

/// A fiber measure with its quadrature weight on the quotient.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightedFiber {
    pub quad_weight: f64,
    #[serde(flatten)]
    pub fiber: FiberMeasure,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureMetadata {
    /// Points per quotient-torus axis (polydisc) or number of Haar samples.
    pub grid: Vec<usize>,
    pub seed: u64,
    /// Fractional grid offsets, one per quotient axis (polydisc only).
    pub offsets: Vec<f64>,
    pub total_fibers: usize,
    pub skipped_fibers: usize,
}

/// Clark measure sampled as a quadrature over fiber measures.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledClarkMeasure {
    pub alpha: Complex64,
    pub domain: DomainKind,
    pub fibers: Vec<WeightedFiber>,
    pub metadata: MeasureMetadata,
}

impl SampledClarkMeasure {
    fn from_fibers(
        alpha: Complex64,
        domain: DomainKind,
        fibers: Vec<FiberMeasure>,
        grid: Vec<usize>,
        seed: u64,
        offsets: Vec<f64>,
    ) -> Result<Self> {
        let total = fibers.len();
        let skipped = fibers.iter().filter(|f| f.skipped).count();
        if skipped as f64 > MAX_SKIPPED_FRACTION * total as f64 {
            return Err(Error::TooManySkipped {
                skipped,
                total,
                max_fraction: MAX_SKIPPED_FRACTION,
            });
        }
        let w = 1.0 / (total - skipped) as f64;
        let fibers = fibers
            .into_iter()
            .map(|fiber| WeightedFiber {
                quad_weight: if fiber.skipped { 0.0 } else { w },
                fiber,
            })
            .collect();
        Ok(Self {
            alpha,
            domain,
            fibers,
            metadata: MeasureMetadata {
                grid,
                seed,
                offsets,
                total_fibers: total,
                skipped_fibers: skipped,
            },
        })
    }

    /// Iterates `(combined weight, point)` over all atoms in a fixed order.
    pub fn weighted_atoms(&self) -> impl Iterator<Item = (f64, &[Complex64])> {
        self.fibers.iter().flat_map(|f| {
            f.fiber
                .atoms
                .iter()
                .map(move |a| (f.quad_weight * a.weight, a.point.as_slice()))
        })
    }

    pub fn atom_count(&self) -> usize {
        self.fibers.iter().map(|f| f.fiber.atoms.len()).sum()
    }

    /// `sum_fibers quad_weight * sum_atoms weight * f(point)`.
    pub fn integrate<F>(&self, f: F) -> Complex64
    where
        F: Fn(&[Complex64]) -> Complex64,
    {
        self.weighted_atoms()
            .map(|(w, z)| f(z) * w)
            .collect::<CompensatedSum>()
            .value()
    }

    pub fn total_mass(&self) -> f64 {
        self.integrate(|_| Complex64::new(1.0, 0.0)).re
    }

    /// Writes the JSON form
    /// `{alpha, domain, grid, fibers: [{rep, atoms: [{w, point, weight}]}], metadata}`.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let c = |z: &Complex64| json!([z.re, z.im]);
        let fibers: Vec<_> = self
            .fibers
            .iter()
            .map(|f| {
                json!({
                    "rep": f.fiber.fiber_rep.iter().map(c).collect::<Vec<_>>(),
                    "quad_weight": f.quad_weight,
                    "skipped": f.fiber.skipped,
                    "atoms": f.fiber.atoms.iter().map(|a| json!({
                        "w": c(&a.w),
                        "point": a.point.iter().map(c).collect::<Vec<_>>(),
                        "weight": a.weight,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "alpha": c(&self.alpha),
            "domain": self.domain,
            "grid": self.metadata.grid,
            "fibers": fibers,
            "metadata": self.metadata,
        })
    }

    /// Atoms as CSV rows: fiber index, w, weight, combined weight and point
    /// coordinates.
    pub fn write_atoms_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let n = self.fibers.first().map_or(0, |f| f.fiber.fiber_rep.len());
        let mut wtr = csv::Writer::from_writer(out);
        let mut header = vec![
            "fiber".to_string(),
            "re_w".into(),
            "im_w".into(),
            "weight".into(),
            "mass".into(),
        ];
        for j in 1..=n {
            header.push(format!("re_z{j}"));
            header.push(format!("im_z{j}"));
        }
        wtr.write_record(&header)?;
        for (i, f) in self.fibers.iter().enumerate() {
            for a in &f.fiber.atoms {
                let mut row = vec![
                    i.to_string(),
                    a.w.re.to_string(),
                    a.w.im.to_string(),
                    a.weight.to_string(),
                    (a.weight * f.quad_weight).to_string(),
                ];
                for z in &a.point {
                    row.push(z.re.to_string());
                    row.push(z.im.to_string());
                }
                wtr.write_record(&row)?;
            }
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Fiber representatives `(1, e^{i t_2}, ..., e^{i t_n})` on a uniform grid
/// over the quotient torus, shifted by per-axis offsets.
fn quotient_grid(n: usize, grid: usize, offsets: &[f64]) -> Vec<Vec<Complex64>> {
    let total = grid.pow((n - 1) as u32);
    (0..total)
        .map(|mut idx| {
            let mut z = Vec::with_capacity(n);
            z.push(Complex64::new(1.0, 0.0));
            for off in offsets {
                let k = idx % grid;
                idx /= grid;
                z.push(Complex64::from_polar(1.0, TAU * (k as f64 + off) / grid as f64));
            }
            z
        })
        .collect()
}

/// Offsets drawn from `seed`; a global shift keeps the grid an equal-weight
/// periodic trapezoid rule.
pub(crate) fn grid_offsets(seed: u64, count: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.random::<f64>()).collect()
}

/// Samples `mu_alpha` on the polydisc as an equal-weight grid of fiber
/// measures over the quotient torus.
pub fn assemble_polydisc(
    phi: &RationalInnerFn,
    alpha: Complex64,
    grid_size: usize,
    jitter_seed: u64,
    opts: &FiberOptions,
) -> Result<SampledClarkMeasure> {
    if phi.domain() != DomainKind::Polydisc {
        return Err(Error::Precondition("assemble_polydisc needs a polydisc function".into()));
    }
    check_alpha(alpha)?;
    let n = phi.nvars();
    if n > 1 && grid_size < MIN_POLYDISC_GRID {
        return Err(Error::Precondition(format!(
            "grid size {grid_size} is below the minimum {MIN_POLYDISC_GRID}"
        )));
    }
    let offsets = grid_offsets(jitter_seed, n - 1);
    let reps = quotient_grid(n, grid_size, &offsets);
    let fibers = reps
        .par_iter()
        .map(|z| fiber_clark_measure(phi, alpha, z, opts))
        .collect::<Result<Vec<_>>>()?;
    SampledClarkMeasure::from_fibers(alpha, DomainKind::Polydisc, fibers, vec![grid_size; n - 1], jitter_seed, offsets)
}

/// Samples `mu_alpha` on the 2x2 matrix ball with Haar-random fiber
/// representatives.
pub fn assemble_matrix_ball(
    phi: &RationalInnerFn,
    alpha: Complex64,
    n_samples: usize,
    seed: u64,
    opts: &FiberOptions,
) -> Result<SampledClarkMeasure> {
    if phi.domain() != DomainKind::MatrixBall2x2 {
        return Err(Error::Precondition("assemble_matrix_ball needs a matrix-ball function".into()));
    }
    check_alpha(alpha)?;
    if n_samples < MIN_HAAR_SAMPLES {
        return Err(Error::Precondition(format!(
            "{n_samples} Haar samples requested, at least {MIN_HAAR_SAMPLES} required"
        )));
    }
    let fibers = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| fiber_clark_measure(phi, alpha, &haar_sample(seed, i).to_vec(), opts))
        .collect::<Result<Vec<_>>>()?;
    SampledClarkMeasure::from_fibers(alpha, DomainKind::MatrixBall2x2, fibers, vec![n_samples], seed, Vec::new())
}

/// Dispatches on the domain: `size` is the grid size for the polydisc and the
/// sample count for the matrix ball.
pub fn assemble(
    phi: &RationalInnerFn,
    alpha: Complex64,
    size: usize,
    seed: u64,
    opts: &FiberOptions,
) -> Result<SampledClarkMeasure> {
    match phi.domain() {
        DomainKind::Polydisc => assemble_polydisc(phi, alpha, size, seed, opts),
        DomainKind::MatrixBall2x2 => assemble_matrix_ball(phi, alpha, size, seed, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn opts() -> FiberOptions {
        FiberOptions::default()
    }

    #[test]
    fn coordinate_measure_is_one_atom_per_fiber() {
        let alpha = Complex64::from_polar(1.0, 0.4);
        let mu = assemble_polydisc(&catalog::z1(2), alpha, 64, 1, &opts()).unwrap();
        assert_eq!(mu.fibers.len(), 64);
        for f in &mu.fibers {
            assert_eq!(f.fiber.atoms.len(), 1);
            assert!((f.fiber.atoms[0].weight - 1.0).abs() < 1e-14);
        }
        assert!((mu.total_mass() - 1.0).abs() < 1e-12);
        let sum_w: f64 = mu.fibers.iter().map(|f| f.quad_weight).sum();
        assert!((sum_w - 1.0).abs() < 1e-12);
    }

    #[test]
    fn integrate_coordinate_examples() {
        let alpha = Complex64::from_polar(1.0, 2.1);
        let mu = assemble_polydisc(&catalog::z1(2), alpha, 64, 3, &opts()).unwrap();
        assert!((mu.integrate(|z| z[0]) - alpha).norm() < 1e-13);
        assert!(mu.integrate(|z| z[1]).norm() < 1e-13);
    }

    #[test]
    fn product_measure_two_atoms() {
        let alpha = Complex64::new(-1.0, 0.0);
        let mu = assemble_polydisc(&catalog::z1z2(), alpha, 64, 5, &opts()).unwrap();
        for f in &mu.fibers {
            assert_eq!(f.fiber.atoms.len(), 2);
            assert!(f.fiber.atoms.iter().all(|a| (a.weight - 0.5).abs() < 1e-13));
        }
        assert!((mu.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rif_mass_identity() {
        let mu = assemble_polydisc(&catalog::rif11(), Complex64::new(1.0, 0.0), 512, 9, &opts()).unwrap();
        assert!((mu.total_mass() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn matrix_ball_examples() {
        let mu = assemble_matrix_ball(&catalog::phi_i22(), Complex64::from_polar(1.0, 1.3), 10_000, 2, &opts()).unwrap();
        assert!((mu.total_mass() - 1.0).abs() < 3.0 / 100.0);
        let mu = assemble_matrix_ball(&catalog::det_2x2(), Complex64::new(1.0, 0.0), 1000, 2, &opts()).unwrap();
        for f in &mu.fibers {
            assert_eq!(f.fiber.atoms.len(), 2);
            assert!(f.fiber.atoms.iter().all(|a| (a.weight - 0.5).abs() < 1e-12));
        }
        assert!(assemble_matrix_ball(&catalog::det_2x2(), Complex64::new(1.0, 0.0), 0, 2, &opts()).is_err());
    }

    #[test]
    fn rejects_small_grid_and_wrong_domain() {
        let one = Complex64::new(1.0, 0.0);
        assert!(assemble_polydisc(&catalog::z1(2), one, 8, 0, &opts()).is_err());
        assert!(assemble_polydisc(&catalog::det_2x2(), one, 64, 0, &opts()).is_err());
        assert!(assemble_matrix_ball(&catalog::z1(2), one, 1000, 0, &opts()).is_err());
    }

    #[test]
    fn json_and_csv_shapes() {
        let mu = assemble_polydisc(&catalog::z1z2(), Complex64::new(1.0, 0.0), 16, 0, &opts()).unwrap();
        let v = mu.to_json();
        assert_eq!(v["fibers"].as_array().unwrap().len(), 16);
        assert_eq!(v["fibers"][0]["atoms"].as_array().unwrap().len(), 2);
        assert!(v["alpha"].is_array());
        let mut buf = Vec::new();
        mu.write_atoms_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 32);
        assert!(text.starts_with("fiber,re_w,im_w,weight,mass,re_z1,im_z1,re_z2,im_z2"));
    }
}
