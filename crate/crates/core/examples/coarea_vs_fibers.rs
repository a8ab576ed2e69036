//! Integrates test functions against the Clark measure twice: by summing
//! fiber atoms and by tracing the level set `{phi = alpha}` with the coarea
//! density.
//!
//! ```text
//! cargo run --release --example coarea_vs_fibers -- [trace.csv]
//! ```

use num_complex::Complex64;
use rif_clark::catalog;
use rif_clark::clark::{assemble_polydisc, integrate_coarea, trace_level_set, FiberOptions};

type TestFn = fn(&[Complex64]) -> Complex64;

fn main() -> rif_clark::Result<()> {
    let phi = catalog::rif11();
    let alpha = Complex64::from_polar(1.0, 0.7);
    let trace = trace_level_set(&phi, alpha, 2048)?;
    let mu = assemble_polydisc(&phi, alpha, 512, 0, &FiberOptions::default())?;
    println!(
        "{} traced points, {} branch events, {} excluded",
        trace.points.len(),
        trace.branch_events,
        trace.excluded
    );
    let tests: [(&str, TestFn); 4] = [
        ("1", |_| Complex64::new(1.0, 0.0)),
        ("z1", |z| z[0]),
        ("z1 z2", |z| z[0] * z[1]),
        ("|z1 + z2|^2", |z| (z[0] + z[1]).norm_sqr().into()),
    ];
    for (name, f) in tests {
        let a = mu.integrate(f);
        let b = integrate_coarea(&trace, f);
        println!("{name:<12} fibers {a:.8}  coarea {b:.8}  diff {:.1e}", (a - b).norm());
    }
    if let Some(path) = std::env::args().nth(1) {
        trace.write_csv(std::fs::File::create(&path)?)?;
        println!("trace written to {path}");
    }
    Ok(())
}
