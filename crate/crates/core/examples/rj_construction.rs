//! Builds `r_j`, the rational function equal to `conj(zeta_j)` on the level
//! set, and follows its ray approximants `r_{j,rho}` as `rho -> 1`.
//!
//! ```text
//! cargo run --release --example rj_construction
//! ```

use num_complex::Complex64;
use rif_clark::catalog;
use rif_clark::clark::{assemble_polydisc, FiberOptions};
use rif_clark::density::{build_rj, rj_ray_bound_check};

fn main() -> rif_clark::Result<()> {
    let rhos = [0.9, 0.99, 0.999];
    for (name, phi) in [("z1z2", catalog::z1z2()), ("rif11", catalog::rif11())] {
        for alpha in [Complex64::new(1.0, 0.0), Complex64::i()] {
            let mu = assemble_polydisc(&phi, alpha, 512, 0, &FiberOptions::default())?;
            for j in 0..2 {
                let r = build_rj(&phi, alpha, j, 2048)?;
                println!(
                    "{name} alpha={alpha} r_{} = ({}) / ({})  agrees on {:.1}% of {} points",
                    j + 1,
                    r.numerator,
                    r.denominator,
                    100.0 * r.validation_pass_rate,
                    r.validated_points
                );
                let ray = rj_ray_bound_check(&r, &mu, &rhos)?;
                println!("    k={} epsilon={:.4} bound={:.3}", ray.k, ray.epsilon, ray.bound);
                for s in &ray.steps {
                    println!("    rho={:<6} sup ratio {:.4}  L2 distance {:.3e}", s.rho, s.max_ratio, s.l2_distance);
                }
            }
        }
    }
    Ok(())
}
