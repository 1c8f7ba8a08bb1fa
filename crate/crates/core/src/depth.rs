//! Jordan depth of `F(N)`: how many nilpotent levels survive a function.
//!
//! For `F = c0 + c_r x^r + ...` and `N^(m+1) = 0`, the nilpotent part
//! `Q = F(N) - c0 I` factors as `N^r H(N)`, so `Q^k = 0` once `r k >= m + 1`
//! and the index of `Q` is at most `ceil((m+1)/r)`.

use serde::{Deserialize, Serialize};

use crate::calculus::{evaluate_series, horner};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{NonpositiveInteger, Scalar};
use crate::series::{Order, TruncSeries};

/// `ceil(m_plus_1 / r)`, or 0 for `r = inf`.
pub fn depth_bound(m_plus_1: usize, r: Order) -> usize {
    match r {
        Order::Finite(r) => m_plus_1.div_ceil(r),
        Order::Infinite => 0,
    }
}

/// Nilpotency index of `q`, except that the zero matrix reports 0.
pub fn effective_index<T: Scalar>(q: &Matrix<T>) -> Result<usize> {
    let cert = q.nilpotency_index()?;
    Ok(if q.is_zero() { 0 } else { cert.index })
}

/// Depth of `F(N) - c0 I` against the bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthReport {
    pub m_plus_1: usize,
    pub contact_order: Order,
    pub bound: usize,
    pub effective_index: usize,
    pub sharp: bool,
}

/// Computes `Q = F(N) - c0 I` and its depth.
///
/// The contact order is read from every stored coefficient of `F`, so a
/// series whose first non-constant term sits above `m` reports that degree
/// (bound 1, `Q = 0`) rather than infinity. Also checks `Q^k = 0` for each
/// `k` with `r k >= m + 1`.
pub fn analyze_depth<T: Scalar>(series: &TruncSeries<T>, n: &Matrix<T>) -> Result<DepthReport> {
    let m_plus_1 = n.nilpotency_index()?.index;
    let value = evaluate_series(series, n)?;
    let q = value.add_scalar(&-series.constant_term().clone());
    let r = series.order();
    let bound = depth_bound(m_plus_1, r);
    let effective = effective_index(&q)?;

    match r {
        Order::Finite(r) => {
            let mut power = q.pow(bound);
            for k in bound..=m_plus_1.max(bound) {
                debug_assert!(r * k >= m_plus_1);
                if !power.is_zero() {
                    return Err(Error::InvariantViolation(format!(
                        "Q^{k} is nonzero although {r}*{k} >= {m_plus_1}"
                    )));
                }
                power = &power * &q;
            }
        }
        Order::Infinite if !q.is_zero() => {
            return Err(Error::InvariantViolation(
                "constant series produced a nonzero nilpotent part".into(),
            ));
        }
        Order::Infinite => {}
    }
    if effective > bound || bound > m_plus_1 {
        return Err(Error::InvariantViolation(format!(
            "effective index {effective} / bound {bound} / index {m_plus_1} out of order"
        )));
    }

    Ok(DepthReport {
        m_plus_1,
        contact_order: r,
        bound,
        effective_index: effective,
        sharp: effective == bound,
    })
}

/// The factors `(N^r, H(N))` with `F(N) - c0 I = N^r H(N)` and
/// `H(N) = c_r I + c_{r+1} N + ...`. `None` when `F` is constant.
pub fn depth_factorization<T: Scalar>(
    series: &TruncSeries<T>,
    n: &Matrix<T>,
) -> Result<Option<(Matrix<T>, Matrix<T>)>> {
    let cert = n.nilpotency_index()?;
    if series.cap() + 1 < cert.index {
        return Err(Error::CapTooSmall {
            cap: series.cap(),
            required: cert.index - 1,
        });
    }
    let Some(r) = series.order().finite() else {
        return Ok(None);
    };
    Ok(Some((n.pow(r), horner(&series.coeffs()[r..], n))))
}

/// Which mechanism makes a hypergeometric sum finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mechanism {
    /// An upper parameter is a nonpositive integer.
    Parameter,
    /// The argument is nilpotent.
    Nilpotent,
    Mixed,
    None,
}

impl std::fmt::Display for Mechanism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mechanism::Parameter => "parameter",
            Mechanism::Nilpotent => "nilpotent",
            Mechanism::Mixed => "mixed",
            Mechanism::None => "none",
        })
    }
}

/// Degree cutoffs of the two termination mechanisms.
///
/// `parameter_cutoff` is the smallest `k` with some upper parameter equal to
/// `-k`; `nilpotent_cutoff` is `m` for an argument of index `m + 1`. The sum
/// runs up to `effective_cutoff`, the smaller of the two.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminationClassification {
    pub mechanism: Mechanism,
    pub parameter_cutoff: Option<usize>,
    pub nilpotent_cutoff: Option<usize>,
    pub effective_cutoff: Option<usize>,
}

impl TerminationClassification {
    pub fn from_cutoffs(parameter_cutoff: Option<usize>, nilpotent_cutoff: Option<usize>) -> Self {
        let mechanism = match (parameter_cutoff, nilpotent_cutoff) {
            (Some(_), Some(_)) => Mechanism::Mixed,
            (Some(_), None) => Mechanism::Parameter,
            (None, Some(_)) => Mechanism::Nilpotent,
            (None, None) => Mechanism::None,
        };
        let effective_cutoff = match (parameter_cutoff, nilpotent_cutoff) {
            (Some(k), Some(m)) => Some(k.min(m)),
            (k, m) => k.or(m),
        };
        Self {
            mechanism,
            parameter_cutoff,
            nilpotent_cutoff,
            effective_cutoff,
        }
    }
}

/// Smallest `k` such that some upper parameter equals `-k`.
pub fn parameter_cutoff<T: NonpositiveInteger>(upper: &[T]) -> Option<usize> {
    upper
        .iter()
        .filter_map(|a| a.as_nonpositive_integer())
        .min()
        .map(|k| k as usize)
}

/// Classifies termination of `pFq(upper; lower; z)` at a scalar argument.
pub fn classify_scalar_termination<T: NonpositiveInteger>(upper: &[T]) -> TerminationClassification {
    TerminationClassification::from_cutoffs(parameter_cutoff(upper), None)
}

/// Classifies termination of `pFq(upper; lower; N)` for nilpotent `N`.
pub fn classify_termination<T: Scalar + NonpositiveInteger>(
    upper: &[T],
    lower: &[T],
    n: &Matrix<T>,
) -> Result<TerminationClassification> {
    let m = n.nilpotency_index()?.index - 1;
    crate::pochhammer::validate_lower_params(lower, m)?;
    Ok(TerminationClassification::from_cutoffs(
        parameter_cutoff(upper),
        Some(m),
    ))
}

/// Depth data for a composition `F(G(N))` with `G(0) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionReport {
    /// Effective index of `G(N)` (0 when `G(N) = 0`).
    pub mu_plus_1: usize,
    /// `ceil(ceil((m+1)/s) / r)`.
    pub coarse_bound: usize,
    /// `ceil((mu+1)/r)`.
    pub refined_bound: usize,
    /// Effective index of `F(G(N)) - c0 I`.
    pub effective: usize,
}

/// Evaluates `F(G(N))` and checks `effective <= refined <= coarse`.
pub fn composition_bound<T: Scalar>(
    outer: &TruncSeries<T>,
    inner: &TruncSeries<T>,
    n: &Matrix<T>,
) -> Result<CompositionReport> {
    if !inner.constant_term().is_zero() {
        return Err(Error::NonzeroConstantInner {
            constant: inner.constant_term().to_string(),
        });
    }
    let m_plus_1 = n.nilpotency_index()?.index;
    let inner_value = evaluate_series(inner, n)?;
    let mu_plus_1 = effective_index(&inner_value)?;

    let r = outer.order();
    let s = inner.order();
    let inner_bound = depth_bound(m_plus_1, s);
    let coarse_bound = depth_bound(inner_bound, r);
    let refined_bound = depth_bound(mu_plus_1, r);

    let composed = evaluate_series(outer, &inner_value)?;
    let effective = effective_index(&composed.add_scalar(&-outer.constant_term().clone()))?;

    if mu_plus_1 > inner_bound || effective > refined_bound || refined_bound > coarse_bound {
        return Err(Error::InvariantViolation(format!(
            "composition chain broken: mu+1 = {mu_plus_1} (<= {inner_bound}), \
             effective {effective} <= refined {refined_bound} <= coarse {coarse_bound}"
        )));
    }
    Ok(CompositionReport {
        mu_plus_1,
        coarse_bound,
        refined_bound,
        effective,
    })
}
