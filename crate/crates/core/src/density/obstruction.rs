use num_complex::Complex64;
use serde::Serialize;

use crate::clark::{check_alpha, DomainKind, RationalInnerFn};
use crate::error::{Error, Result};
use crate::poly::{content_in_variable, roots_on_circle, MultiPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Prediction {
    Dense,
    NotDense,
}

impl std::fmt::Display for Prediction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Prediction::Dense => "dense",
            Prediction::NotDense => "not_dense",
        })
    }
}

/// Content of `p - alpha q` in one variable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VariableContent {
    /// 1-based variable index.
    pub j: usize,
    pub content: String,
    pub content_roots: Vec<Complex64>,
    /// Set when `V_alpha` contains a cylinder `pr_j^{-1}(V)`.
    pub triggers: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionVerdict {
    pub alpha: Complex64,
    pub per_variable: Vec<VariableContent>,
    pub prediction: Prediction,
}

/// Decides whether holomorphic polynomials are dense in `L^2(mu_alpha)` for a
/// bivariate RIF.
///
/// `V_alpha` contains a cylinder `{zeta : zeta_k in V}` exactly when the
/// content of `p - alpha q` in `z_j` (a polynomial in the other variable
/// `z_k`) has a unimodular root.
pub fn obstruction_detect(
    phi: &RationalInnerFn,
    alpha: Complex64,
    tol_rank: f64,
    tol_circle: f64,
) -> Result<ObstructionVerdict> {
    check_alpha(alpha)?;
    if phi.domain() != DomainKind::Polydisc || phi.nvars() != 2 {
        return Err(Error::Unsupported(
            "the obstruction detector handles bivariate polydisc functions only".into(),
        ));
    }
    let h = phi.level_polynomial(alpha);
    if h.is_zero() {
        return Err(Error::InvalidFunction("p - alpha q vanishes identically (phi is constant)".into()));
    }
    let per_variable = (0..2)
        .map(|j| content_report(&h, j, tol_rank, tol_circle))
        .collect::<Result<Vec<_>>>()?;
    let prediction = if per_variable.iter().any(|v| v.triggers) {
        Prediction::NotDense
    } else {
        Prediction::Dense
    };
    Ok(ObstructionVerdict {
        alpha,
        per_variable,
        prediction,
    })
}

fn content_report(h: &MultiPoly, j: usize, tol_rank: f64, tol_circle: f64) -> Result<VariableContent> {
    let content = content_in_variable(h, j, tol_rank)?;
    let roots = if content.degree().unwrap_or(0) > 0 {
        roots_on_circle(&content.to_unipoly_in(1 - j)?, tol_circle)?.roots
    } else {
        Vec::new()
    };
    Ok(VariableContent {
        j: j + 1,
        content: content.to_string(),
        triggers: !roots.is_empty(),
        content_roots: roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::poly::{DEFAULT_TOL_CIRCLE, DEFAULT_TOL_RANK};

    fn verdict(phi: &RationalInnerFn, alpha: Complex64) -> ObstructionVerdict {
        obstruction_detect(phi, alpha, DEFAULT_TOL_RANK, DEFAULT_TOL_CIRCLE).unwrap()
    }

    #[test]
    fn coordinate_is_not_dense() {
        let one = Complex64::new(1.0, 0.0);
        let v = verdict(&catalog::z1(2), one);
        assert_eq!(v.prediction, Prediction::NotDense);
        assert!(!v.per_variable[0].triggers);
        assert!(v.per_variable[1].triggers);
        assert!((v.per_variable[1].content_roots[0] - one).norm() < 1e-12);
        assert_eq!(verdict(&catalog::z2(), Complex64::i()).prediction, Prediction::NotDense);
    }

    #[test]
    fn dense_cases() {
        for alpha in [Complex64::new(1.0, 0.0), Complex64::i()] {
            for phi in [catalog::z1z2(), catalog::z1sq_z2(), catalog::rif11(), catalog::z1_blaschke(0.2)] {
                assert_eq!(verdict(&phi, alpha).prediction, Prediction::Dense, "{}", phi.p());
            }
        }
    }

    #[test]
    fn rejects_matrix_ball() {
        assert!(obstruction_detect(&catalog::det_2x2(), Complex64::new(1.0, 0.0), 1e-8, 1e-8).is_err());
    }
}
