//! Reproduces `(1 - |phi(z)|^2) / |alpha - phi(z)|^2` from the sampled Clark
//! measure at interior points of the bidisc.
//!
//! ```text
//! cargo run --release --example poisson
//! ```

use num_complex::Complex64;
use rif_clark::catalog;
use rif_clark::clark::{assemble_polydisc, poisson_check, FiberOptions};

fn main() -> rif_clark::Result<()> {
    let c = Complex64::new;
    let points = [[c(0.0, 0.0), c(0.0, 0.0)], [c(0.3, 0.1), c(-0.2, 0.4)], [c(0.5, 0.0), c(0.0, -0.5)]];
    for (name, phi) in [("z1z2", catalog::z1z2()), ("rif11", catalog::rif11())] {
        for alpha in [c(1.0, 0.0), Complex64::from_polar(1.0, 0.7)] {
            for grid in [64, 512] {
                let mu = assemble_polydisc(&phi, alpha, grid, 0, &FiberOptions::default())?;
                for z in &points {
                    let r = poisson_check(&mu, &phi, z)?;
                    println!(
                        "{name:<6} alpha={alpha:.3} grid={grid:<4} z=({:.1}, {:.1})  measure {:.8}  exact {:.8}  err {:.1e}",
                        z[0],
                        z[1],
                        r.lhs,
                        r.rhs,
                        r.abs_err()
                    );
                }
            }
        }
    }
    Ok(())
}
