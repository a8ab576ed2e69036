//! Averages Clark measures over equally spaced `alpha` and compares with the
//! boundary measure, on the bidisc and on U(2).
//!
//! ```text
//! cargo run --release --example disintegration
//! ```

use num_complex::Complex64;
use rif_clark::catalog;
use rif_clark::clark::{disintegration_check, FiberOptions};

fn main() -> rif_clark::Result<()> {
    let opts = FiberOptions::default();
    for n_alpha in [4, 16, 64] {
        let r = disintegration_check(&catalog::rif11(), |z: &[Complex64]| (z[0] + z[1]).norm_sqr().into(), n_alpha, 512, 0, &opts)?;
        println!("rif11 |z1 + z2|^2  n_alpha={n_alpha:<3} average {:.6}  boundary {:.6}", r.lhs, r.rhs);
    }
    let r = disintegration_check(&catalog::phi_i22(), |z: &[Complex64]| (z[0] + z[3]).norm_sqr().into(), 32, 20_000, 0, &opts)?;
    println!("phi_i22 |a + d|^2 n_alpha=32  average {:.4}  boundary {:.4}", r.lhs, r.rhs);
    Ok(())
}
