//! Random polynomials that do not vanish on the hull of `B(0, eps)` and `1`
//! satisfy `|p(x)| >= (eps/2)^k |p(1)|` on `[0, 1]`. Prints the tightest
//! instances.
//!
//! ```text
//! cargo run --release --example lemma_bound -- [instances]
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rif_clark::density::{lemma_lower_bound_test, random_admissible_instance};

fn main() -> rif_clark::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let (p, eps) = random_admissible_instance(&mut rng, 5);
        let o = lemma_lower_bound_test(&p, eps, 10_000)?;
        rows.push((o.min_ratio / o.bound, p.degree().unwrap_or(0), eps, o));
    }
    let failures = rows.iter().filter(|r| !r.3.holds).count();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    println!("{n} instances, {failures} violations; tightest:");
    for (slack, k, eps, o) in rows.iter().filter(|r| r.1 > 0).take(5) {
        println!("  k={k} eps={eps:.3}  min ratio {:.3e}  bound {:.3e}  slack x{slack:.2}", o.min_ratio, o.bound);
    }
    Ok(())
}
