//! Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rif_clark::cli::commands::cmd_selftest;
use rif_clark::cli::selftest::{Criterion, CriterionFn, CRITERIA};
use rif_clark::cli::RunConfig;

const SEED: u64 = 0;

/// Wall-time limits per criterion, `None` where no limit applies.
const LIMITS: [Option<u64>; 8] = [Some(10), Some(30), Some(60), Some(120), None, None, Some(120), None];

struct Outcome {
    id: usize,
    name: String,
    pass: bool,
    elapsed: Duration,
    detail: Vec<String>,
}

fn run_criterion(id: usize, f: CriterionFn) -> Outcome {
    let start = Instant::now();
    let result = f(SEED);
    let elapsed = start.elapsed();
    match result {
        Ok(c) => from_criterion(id, c, elapsed),
        Err(e) => Outcome {
            id,
            name: format!("criterion {id}"),
            pass: false,
            elapsed,
            detail: vec![format!("error: {e}")],
        },
    }
}

fn from_criterion(id: usize, c: Criterion, elapsed: Duration) -> Outcome {
    let detail = c
        .failures()
        .map(|k| format!("{}: error {:.3e} > tolerance {:.3e}", k.name, k.error, k.tolerance))
        .collect();
    Outcome {
        id,
        name: format!("{} ({} checks)", c.name, c.checks.len()),
        pass: c.pass,
        elapsed,
        detail,
    }
}

fn determinism() -> Outcome {
    let start = Instant::now();
    let cfg = RunConfig::defaults("selftest");
    let runs: Vec<_> = (0..2).map(|_| cmd_selftest(&cfg).map(|r| r.to_json_pretty())).collect();
    let elapsed = start.elapsed();
    let (pass, detail) = match (&runs[0], &runs[1]) {
        (Ok(a), Ok(b)) if a == b => (true, vec![]),
        (Ok(a), Ok(b)) => {
            let line = a.lines().zip(b.lines()).position(|(x, y)| x != y).map_or(0, |k| k + 1);
            (false, vec![format!("reports differ from line {line}")])
        }
        (Err(e), _) | (_, Err(e)) => (false, vec![format!("error: {e}")]),
    };
    Outcome {
        id: 8,
        name: "selftest determinism".into(),
        pass,
        elapsed,
        detail,
    }
}

fn main() -> ExitCode {
    let mut outcomes: Vec<Outcome> = CRITERIA.iter().enumerate().map(|(k, &f)| run_criterion(k + 1, f)).collect();
    outcomes.push(determinism());

    let mut all = true;
    for o in &mut outcomes {
        if let Some(limit) = LIMITS[o.id - 1] {
            if o.elapsed > Duration::from_secs(limit) {
                o.pass = false;
                o.detail.push(format!("runtime {:.1} s exceeds {limit} s", o.elapsed.as_secs_f64()));
            }
        }
        all &= o.pass;
        let limit = LIMITS[o.id - 1].map_or(String::new(), |l| format!(" / {l} s"));
        println!(
            "{} criterion {}: {} [{:.2} s{limit}]",
            if o.pass { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.elapsed.as_secs_f64()
        );
        for d in &o.detail {
            println!("    {d}");
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
