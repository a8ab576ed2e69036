//! Runs the density decision on a small bivariate corpus and compares the
//! algebraic verdict with least-squares residuals of the conjugate
//! coordinates.
//!
//! ```text
//! cargo run --release --example density_decision
//! ```

use num_complex::Complex64;
use rif_clark::catalog;
use rif_clark::density::{analyze_density, DensityConfig};

fn main() -> rif_clark::Result<()> {
    let cfg = DensityConfig::default();
    for (name, phi) in catalog::density_corpus() {
        for alpha in [Complex64::new(1.0, 0.0), Complex64::i()] {
            let r = analyze_density(&phi, alpha, &cfg)?;
            let res: Vec<String> = r.residuals.iter().map(|e| format!("{}={:.2e}", e.target, e.residual)).collect();
            println!(
                "{name:<12} alpha={alpha:<6} {:<9} {}  consistent={}",
                r.prediction.to_string(),
                res.join(" "),
                r.consistent
            );
        }
    }
    Ok(())
}
