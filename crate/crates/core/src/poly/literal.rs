use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::MultiPoly;
use crate::error::{Error, Result};

/// JSON form of a polynomial:
/// `{"nvars": n, "terms": [{"exp": [e1, ..., en], "re": x, "im": y}, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyLiteral {
    pub nvars: usize,
    pub terms: Vec<TermLiteral>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermLiteral {
    pub exp: Vec<u32>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl PolyLiteral {
    pub fn to_poly(&self) -> Result<MultiPoly> {
        if self.nvars == 0 {
            return Err(Error::PolyLiteral("nvars must be positive".into()));
        }
        for (i, t) in self.terms.iter().enumerate() {
            if t.exp.len() != self.nvars {
                return Err(Error::PolyLiteral(format!(
                    "term {i}: exponent has {} entries, expected {}",
                    t.exp.len(),
                    self.nvars
                )));
            }
            if !t.re.is_finite() || !t.im.is_finite() {
                return Err(Error::PolyLiteral(format!("term {i}: coefficient is not finite")));
            }
        }
        MultiPoly::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|t| (t.exp.clone(), Complex64::new(t.re, t.im))),
        )
    }
}

impl From<&MultiPoly> for PolyLiteral {
    fn from(p: &MultiPoly) -> Self {
        Self {
            nvars: p.nvars(),
            terms: p
                .terms()
                .map(|(e, c)| TermLiteral {
                    exp: e.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl MultiPoly {
    /// Parses the JSON literal form. Syntax errors carry the line and column
    /// reported by the JSON parser.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let lit: PolyLiteral = serde_json::from_str(s).map_err(|e| {
            Error::PolyLiteral(format!("{e} (line {}, column {})", e.line(), e.column()))
        })?;
        lit.to_poly()
    }

    pub fn to_literal(&self) -> PolyLiteral {
        PolyLiteral::from(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_literal() {
        let p = MultiPoly::from_json_str(
            r#"{"nvars": 2, "terms": [{"exp": [1, 1], "re": 2.0, "im": 0.0}, {"exp": [0, 0], "re": -1, "im": 0.5}]}"#,
        )
        .unwrap();
        assert_eq!(p.coeff(&[1, 1]), Complex64::new(2.0, 0.0));
        assert_eq!(p.coeff(&[0, 0]), Complex64::new(-1.0, 0.5));
        let back = MultiPoly::from_json_str(&serde_json::to_string(&p.to_literal()).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn reports_location_of_syntax_errors() {
        let err = MultiPoly::from_json_str("{\"nvars\": 2,\n \"terms\": [{\"exp\": [1, -1], \"re\": 1}]}")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn rejects_wrong_exponent_length() {
        let err = MultiPoly::from_json_str(r#"{"nvars": 2, "terms": [{"exp": [1], "re": 1}]}"#).unwrap_err();
        assert!(err.to_string().contains("term 0"));
    }
}
