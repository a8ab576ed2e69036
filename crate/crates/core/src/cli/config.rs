use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::clark::{DomainKind, RationalInnerFn};
use crate::error::{Error, Result};
use crate::poly::{PolyLiteral, DEFAULT_TOL_CIRCLE, DEFAULT_TOL_RANK};

pub const GRID_RANGE: (usize, usize) = (16, 8192);
pub const SAMPLE_RANGE: (usize, usize) = (1_000, 1_000_000);

/// Parses `1`, `-0.5`, `i`, `-2i`, `0.3-0.4i`, or `exp:THETA` (the unit
/// complex number at angle THETA).
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let err = || Error::Config(format!("cannot parse '{s}' as a complex number"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(angle) = t.strip_prefix("exp:") {
        let theta: f64 = angle.parse().map_err(|_| err())?;
        return Ok(Complex64::from_polar(1.0, theta));
    }
    if t.is_empty() {
        return Err(err());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|x| Complex64::new(x, 0.0)).map_err(|_| err());
    };
    // Split at the last sign that is not part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |s: &str| -> Result<f64> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => s.parse().map_err(|_| err()),
        }
    };
    match split {
        Some(k) => {
            let re: f64 = body[..k].parse().map_err(|_| err())?;
            Ok(Complex64::new(re, imag(&body[k..])?))
        }
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

/// `--alpha` is either a single complex number or `count:N` for `N` equally
/// spaced points on the circle.
pub fn parse_alphas(s: &str) -> Result<Vec<Complex64>> {
    if let Some(n) = s.trim().strip_prefix("count:") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::Config(format!("cannot parse '{n}' as an alpha count")))?;
        if n == 0 {
            return Err(Error::Config("alpha count must be positive".into()));
        }
        return Ok((0..n).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64)).collect());
    }
    let a = parse_complex(s)?;
    if (a.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Config(format!("alpha = {a} is not unimodular")));
    }
    Ok(vec![a])
}

/// JSON description of a rational inner function.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhiLiteral {
    #[serde(default = "default_domain")]
    domain: DomainKind,
    p: PolyLiteral,
    q: PolyLiteral,
}

fn default_domain() -> DomainKind {
    DomainKind::Polydisc
}

fn json_error(what: &str, e: serde_json::Error) -> Error {
    Error::Config(format!("{what}: {e}"))
}

/// Resolves `--phi`: `name:<catalog entry>`, inline JSON
/// `{"domain": ..., "p": ..., "q": ...}`, or a path to such a file.
pub fn parse_phi(spec: &str) -> Result<RationalInnerFn> {
    let spec = spec.trim();
    if let Some(name) = spec.strip_prefix("name:") {
        return catalog::by_name(name);
    }
    let (text, what) = if spec.starts_with('{') {
        (spec.to_string(), "inline --phi".to_string())
    } else {
        let text = std::fs::read_to_string(spec)
            .map_err(|e| Error::Config(format!("cannot read --phi file '{spec}': {e}")))?;
        (text, format!("--phi file '{spec}'"))
    };
    let lit: PhiLiteral = serde_json::from_str(&text).map_err(|e| json_error(&what, e))?;
    let p = lit.p.to_poly()?;
    let q = lit.q.to_poly()?;
    RationalInnerFn::new(p, q, lit.domain)
}

/// Contents of the optional `--config` file; every field is optional and
/// command-line flags take precedence.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub phi: Option<serde_json::Value>,
    pub alpha: Option<String>,
    pub grid: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub degree: Option<u32>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub tol_circle: Option<f64>,
    pub tol_rank: Option<f64>,
    pub n_theta: Option<usize>,
    pub n_alpha: Option<usize>,
    pub x1: Option<Vec<String>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config '{}': {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| json_error(&format!("config '{}'", path.display()), e))
    }
}

/// Fully resolved settings of one run.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    /// The `--phi` argument as given.
    pub phi: Option<String>,
    pub alphas: Vec<Complex64>,
    pub grid: usize,
    pub samples: usize,
    pub seed: u64,
    pub degree: u32,
    pub n_theta: usize,
    pub n_alpha: usize,
    pub tol_circle: f64,
    pub tol_rank: f64,
    pub x1: Vec<Complex64>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn defaults(command: &str) -> Self {
        Self {
            command: command.to_string(),
            phi: None,
            alphas: vec![Complex64::new(1.0, 0.0)],
            grid: 512,
            samples: 10_000,
            seed: 0,
            degree: 6,
            n_theta: 2048,
            n_alpha: 64,
            tol_circle: DEFAULT_TOL_CIRCLE,
            tol_rank: DEFAULT_TOL_RANK,
            x1: crate::symmetric::DemoConfig::default().x1,
            out: None,
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let in_range = |name: &str, v: usize, (lo, hi): (usize, usize)| {
            if v < lo || v > hi {
                Err(Error::Config(format!("--{name} {v} is outside [{lo}, {hi}]")))
            } else {
                Ok(())
            }
        };
        in_range("grid", self.grid, GRID_RANGE)?;
        in_range("samples", self.samples, SAMPLE_RANGE)?;
        in_range("n-theta", self.n_theta, (16, 1 << 16))?;
        in_range("n-alpha", self.n_alpha, (1, 4096))?;
        if self.degree == 0 || self.degree > 12 {
            return Err(Error::Config(format!("--degree {} is outside [1, 12]", self.degree)));
        }
        for (name, v) in [("tol-circle", self.tol_circle), ("tol-rank", self.tol_rank)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Config(format!("--{name} {v} must lie in (0, 1)")));
            }
        }
        if let Some(x) = self.x1.iter().find(|x| x.norm() >= 1.0) {
            return Err(Error::Config(format!("--x1 {x} must satisfy |x1| < 1")));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("--workers must be positive".into()));
        }
        Ok(())
    }

    pub fn phi(&self) -> Result<RationalInnerFn> {
        match &self.phi {
            Some(s) => parse_phi(s),
            None => Err(Error::Config(format!("command '{}' needs --phi", self.command))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = Complex64::new;
        assert_eq!(parse_complex("1").unwrap(), c(1.0, 0.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("0.3-0.4i").unwrap(), c(0.3, -0.4));
        assert_eq!(parse_complex("-2.5i").unwrap(), c(0.0, -2.5));
        assert_eq!(parse_complex("1e-3+2e-1i").unwrap(), c(1e-3, 0.2));
        assert_eq!(parse_complex("1 + i").unwrap(), c(1.0, 1.0));
        assert!((parse_complex("exp:0.7").unwrap() - Complex64::from_polar(1.0, 0.7)).norm() < 1e-16);
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn alpha_forms() {
        assert_eq!(parse_alphas("count:4").unwrap().len(), 4);
        assert!(parse_alphas("0.5").is_err());
        assert!(parse_alphas("count:0").is_err());
    }

    #[test]
    fn phi_forms() {
        assert_eq!(parse_phi("name:rif11").unwrap().nvars(), 2);
        let inline = r#"{"p": {"nvars": 2, "terms": [{"exp": [1, 1], "re": 1}]},
                         "q": {"nvars": 2, "terms": [{"exp": [0, 0], "re": 1}]}}"#;
        assert_eq!(parse_phi(inline).unwrap().degree_bound(), 2);
        let bad = "{\"p\": {\"nvars\": 2,\n \"terms\": [}";
        let msg = parse_phi(bad).unwrap_err().to_string();
        assert!(msg.contains("line 2"), "{msg}");
        assert!(parse_phi("name:nope").is_err());
    }

    #[test]
    fn validation() {
        let mut c = RunConfig::defaults("compute");
        assert!(c.validate().is_ok());
        c.grid = 8;
        assert!(c.validate().is_err());
        let mut c = RunConfig::defaults("demo-i22");
        c.x1 = vec![Complex64::new(1.0, 0.0)];
        assert!(c.validate().is_err());
    }
}
