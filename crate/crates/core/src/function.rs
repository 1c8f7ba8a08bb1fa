//! JSON mini-language for the functions the CLI applies:
//!
//! ```json
//! {"kind": "hypergeom", "upper": [3], "lower": [5]}
//! {"kind": "poly", "coeffs": [5, -4, 1], "center": 2}
//! {"kind": "exp", "t": "1/2", "center": 2}
//! ```
//!
//! `poly` coefficients are in powers of `z`. `center` is the expansion
//! point; it defaults to the eigenvalue of the operator the function is
//! applied to, and must equal it when given.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::depth::{parameter_cutoff, Mechanism, TerminationClassification};
use crate::error::{Error, Result};
use crate::scalar::GaussianRational;
use crate::series::TruncSeries;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FunctionSpec {
    /// `pFq(upper; lower; z - center)`.
    Hypergeom {
        #[serde(default)]
        upper: Vec<GaussianRational>,
        #[serde(default)]
        lower: Vec<GaussianRational>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<GaussianRational>,
    },
    /// `sum_k coeffs[k] z^k`.
    Poly {
        coeffs: Vec<GaussianRational>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<GaussianRational>,
    },
    /// `exp(t (z - center))`.
    Exp {
        t: GaussianRational,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<GaussianRational>,
    },
}

impl FunctionSpec {
    pub fn parse_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn center(&self) -> Option<&GaussianRational> {
        match self {
            FunctionSpec::Hypergeom { center, .. }
            | FunctionSpec::Poly { center, .. }
            | FunctionSpec::Exp { center, .. } => center.as_ref(),
        }
    }

    /// Coefficients of `G(w) = F(lambda + w)` for an operator `lambda I + N`
    /// with `N^(m+1) = 0`. Polynomials keep their full degree so their
    /// contact order is not hidden by truncation.
    pub fn series_at(&self, lambda: &GaussianRational, m: usize) -> Result<TruncSeries<GaussianRational>> {
        if let Some(c) = self.center() {
            if c != lambda {
                return Err(Error::Unsupported(format!(
                    "function is centered at {c} but the operator's eigenvalue is {lambda}"
                )));
            }
        }
        Ok(match self {
            FunctionSpec::Hypergeom { upper, lower, .. } => TruncSeries::hypergeom(upper, lower, m)?,
            FunctionSpec::Poly { coeffs, .. } => {
                if coeffs.is_empty() {
                    return Err(Error::Parse("polynomial needs at least one coefficient".into()));
                }
                TruncSeries::recenter_poly(coeffs, lambda, m.max(coeffs.len() - 1))
            }
            FunctionSpec::Exp { t, .. } => TruncSeries::exp_scaled(t, m),
        })
    }

    /// Termination mechanism when evaluated at an argument of index `m + 1`.
    pub fn termination(&self, m: usize) -> TerminationClassification {
        match self {
            FunctionSpec::Hypergeom { upper, .. } => {
                TerminationClassification::from_cutoffs(parameter_cutoff(upper), Some(m))
            }
            _ => TerminationClassification::from_cutoffs(None, Some(m)),
        }
    }

    pub fn mechanism(&self, m: usize) -> Mechanism {
        self.termination(m).mechanism
    }
}

fn list(xs: &[GaussianRational]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn shifted(center: &Option<GaussianRational>) -> String {
    match center {
        Some(c) if *c == GaussianRational::default() => "z".into(),
        Some(c) => format!("z-({c})"),
        None => "w".into(),
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Hypergeom { upper, lower, center } => write!(
                f,
                "{}F{}({}; {}; {})",
                upper.len(),
                lower.len(),
                list(upper),
                list(lower),
                shifted(center)
            ),
            FunctionSpec::Poly { coeffs, .. } => {
                let terms: Vec<String> = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != GaussianRational::default())
                    .map(|(k, c)| match k {
                        0 => format!("{c}"),
                        1 => format!("({c})z"),
                        _ => format!("({c})z^{k}"),
                    })
                    .collect();
                if terms.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", terms.join(" + "))
                }
            }
            FunctionSpec::Exp { t, center } => write!(f, "exp({t}*({}))", shifted(center)),
        }
    }
}
