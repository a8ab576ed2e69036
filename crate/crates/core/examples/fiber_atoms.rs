//! Clark atoms on a few circular fibers of the degree-(1,1) RIF
//! `(2 z1 z2 - z1 - z2) / (2 - z1 - z2)`, and the assembled measure written
//! to CSV.
//!
//! ```text
//! cargo run --release --example fiber_atoms -- [out.csv]
//! ```

use num_complex::Complex64;
use rif_clark::catalog;
use rif_clark::clark::{assemble_polydisc, fiber_clark_measure, FiberOptions};

fn main() -> rif_clark::Result<()> {
    let phi = catalog::rif11();
    let alpha = Complex64::i();
    let opts = FiberOptions::default();
    for t in [0.0, 1.0, 2.0, 3.0] {
        let zeta = [Complex64::new(1.0, 0.0), Complex64::from_polar(1.0, t)];
        let f = fiber_clark_measure(&phi, alpha, &zeta, &opts)?;
        print!("theta2 = {t:.1}:");
        if f.skipped {
            println!("  singular fiber, skipped");
            continue;
        }
        for a in &f.atoms {
            print!("  w = {:.4}  weight = {:.5}", a.w, a.weight);
        }
        println!("  (mass {:.5})", f.mass());
    }

    let mu = assemble_polydisc(&phi, alpha, 256, 0, &opts)?;
    println!(
        "grid 256: {} atoms on {} fibers, total mass {:.6}",
        mu.atom_count(),
        mu.metadata.total_fibers,
        mu.total_mass()
    );
    if let Some(path) = std::env::args().nth(1) {
        mu.write_atoms_csv(std::fs::File::create(&path)?)?;
        println!("atoms written to {path}");
    }
    Ok(())
}
