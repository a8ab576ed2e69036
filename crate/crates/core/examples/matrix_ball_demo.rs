//! The 2x2 matrix ball: innerness of `(ad - bc - d)/(1 - a)`, its torus family
//! inside a level set, the rank-3 Jacobian, and the density contrast with
//! `det`.
//!
//! ```text
//! cargo run --release --example matrix_ball_demo
//! ```

use rif_clark::symmetric::{run_demo, DemoConfig};

fn main() -> rif_clark::Result<()> {
    let cfg = DemoConfig::default();
    let t = std::time::Instant::now();
    let report = run_demo(&cfg)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    println!("pass: {}  ({:.1}s)", report.pass(), t.elapsed().as_secs_f64());
    Ok(())
}
