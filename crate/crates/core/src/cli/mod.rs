//! The `clark` command-line tool.

pub mod commands;
pub mod config;
pub mod report;
pub mod selftest;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub use config::{parse_alphas, parse_complex, parse_phi, FileConfig, RunConfig};
pub use report::{Check, Report};

use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "clark", version, about = "Clark measures of rational inner functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Assemble the Clark measure and check its total mass.
    Compute,
    /// Poisson, disintegration and fiber-vs-coarea checks.
    Verify,
    /// Density decision for a bivariate polydisc function.
    Density,
    /// The 2x2 matrix ball demonstration.
    #[command(name = "demo-i22")]
    DemoI22,
    /// Every acceptance check on fixed inputs.
    Selftest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Compute => "compute",
            Command::Verify => "verify",
            Command::Density => "density",
            Command::DemoI22 => "demo-i22",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    /// `name:<catalog>`, inline JSON `{"domain", "p", "q"}`, or a JSON file.
    #[arg(long, global = true)]
    pub phi: Option<String>,
    /// A unimodular complex number (`1`, `i`, `0.6+0.8i`, `exp:0.7`) or `count:N`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Polydisc fiber grid per axis.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Haar samples on the matrix ball.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Polynomial degree of the least-squares probe.
    #[arg(long, global = true)]
    pub degree: Option<u32>,
    /// Write the JSON report here; sidecar files go next to it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long = "tol-circle", global = true)]
    pub tol_circle: Option<f64>,
    #[arg(long = "tol-rank", global = true)]
    pub tol_rank: Option<f64>,
    /// JSON file with any of the above; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Torus-family parameter for demo-i22 (repeatable).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub x1: Vec<String>,
    /// Level-set trace points.
    #[arg(long = "n-theta", global = true)]
    pub n_theta: Option<usize>,
    /// Alpha grid for the disintegration check.
    #[arg(long = "n-alpha", global = true)]
    pub n_alpha: Option<usize>,
    /// Record wall time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

/// Defaults, then the config file, then flags.
pub fn resolve(command: &Command, flags: &Flags) -> Result<RunConfig> {
    let mut cfg = RunConfig::defaults(command.name());
    let file = match &flags.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    if let Some(phi) = file.phi {
        cfg.phi = Some(match phi {
            serde_json::Value::String(s) => s,
            other => other.to_string(),
        });
    }
    macro_rules! merge {
        ($($field:ident),*) => {
            $(
                if let Some(v) = file.$field { cfg.$field = v; }
                if let Some(v) = flags.$field.clone() { cfg.$field = v; }
            )*
        };
    }
    merge!(grid, samples, seed, degree, tol_circle, tol_rank, n_theta, n_alpha);
    if let Some(p) = &flags.phi {
        cfg.phi = Some(p.clone());
    }
    if let Some(a) = flags.alpha.as_ref().or(file.alpha.as_ref()) {
        cfg.alphas = config::parse_alphas(a)?;
    } else if command.name() == "demo-i22" {
        cfg.alphas = vec![num_complex::Complex64::i()];
    }
    let x1 = if flags.x1.is_empty() { file.x1.unwrap_or_default() } else { flags.x1.clone() };
    if !x1.is_empty() {
        cfg.x1 = x1.iter().map(|s| config::parse_complex(s)).collect::<Result<_>>()?;
    }
    cfg.out = flags.out.clone().or(file.out);
    cfg.workers = flags.workers.or(file.workers);
    cfg.validate()?;
    Ok(cfg)
}

pub fn run(command: &Command, cfg: &RunConfig) -> Result<Report> {
    match command {
        Command::Compute => commands::cmd_compute(cfg),
        Command::Verify => commands::cmd_verify(cfg),
        Command::Density => commands::cmd_density(cfg),
        Command::DemoI22 => commands::cmd_demo(cfg),
        Command::Selftest => commands::cmd_selftest(cfg),
    }
}

/// 0: every check passed; 1: a check failed or the numerics broke down;
/// 2: bad input.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Precondition(_) | Error::Unsupported(_) | Error::InvalidFunction(_) => 2,
        _ => 1,
    }
}

pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(pass) => i32::from(!pass),
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli) -> Result<bool> {
    let cfg = resolve(&cli.command, &cli.flags)?;
    if let Some(n) = cfg.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("cannot set up {n} workers: {e}")))?;
    }
    if let Some(dir) = cfg.out.as_ref().and_then(|p| p.parent()).filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let start = Instant::now();
    let mut report = run(&cli.command, &cfg)?;
    if cli.flags.timing {
        report.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    let text = report.to_json_pretty();
    match &cfg.out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {}: error {:.3e} vs tolerance {:.3e}", c.name, c.error, c.tolerance);
    }
    Ok(report.pass)
}
