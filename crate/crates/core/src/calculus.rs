//! Evaluation of truncated series at nilpotent matrices.
//!
//! When `N^(m+1) = 0`, any formal series collapses to `sum_{j<=m} c_j N^j`, so a
//! [`TruncSeries`] of cap at least `m` determines `F(N)` completely, with no
//! convergence hypothesis.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, NilpotencyCertificate};
use crate::scalar::{int, pow, Scalar};
use crate::series::TruncSeries;

/// Horner evaluation of the polynomial with coefficients `coeffs` at `arg`.
pub(crate) fn horner<T: Scalar>(coeffs: &[T], arg: &Matrix<T>) -> Matrix<T> {
    let n = arg.dim();
    let mut acc = Matrix::zeros(n);
    for c in coeffs.iter().rev() {
        acc = (&acc * arg).add_scalar(c);
    }
    acc
}

fn check_cap<T: Scalar>(series: &TruncSeries<T>, cert: &NilpotencyCertificate<T>) -> Result<()> {
    let required = cert.index - 1;
    if series.cap() < required {
        return Err(Error::CapTooSmall {
            cap: series.cap(),
            required,
        });
    }
    Ok(())
}

/// `F(N) = sum_{j=0}^{cap} c_j N^j`, evaluated by Horner's rule.
///
/// Fails with `CapTooSmall` when the series does not reach degree `index - 1`,
/// since the surviving terms would then be unknown.
pub fn evaluate_series<T: Scalar>(series: &TruncSeries<T>, n: &Matrix<T>) -> Result<Matrix<T>> {
    let cert = n.nilpotency_index()?;
    check_cap(series, &cert)?;
    Ok(horner(series.coeffs(), n))
}

/// `pFq(upper; lower; N)` as the finite sum up to the nilpotency index of `N`.
pub fn evaluate_hypergeom<T: Scalar>(upper: &[T], lower: &[T], n: &Matrix<T>) -> Result<Matrix<T>> {
    let cert = n.nilpotency_index()?;
    let series = TruncSeries::hypergeom(upper, lower, cert.index - 1)?;
    Ok(horner(series.coeffs(), n))
}

/// Inverse of `F(N)` through the finite Neumann series
/// `c0^-1 sum_{k=0}^{m} (-1)^k c0^-k R(N)^k` with `R = F - c0`.
pub fn invert_via_neumann<T: Scalar>(series: &TruncSeries<T>, n: &Matrix<T>) -> Result<Matrix<T>> {
    let c0 = series.constant_term().clone();
    if c0.is_zero() {
        return Err(Error::NotInvertible);
    }
    let cert = n.nilpotency_index()?;
    check_cap(series, &cert)?;
    let c0_inv = T::one() / c0;
    let r = horner(series.nonconstant_part().coeffs(), n);
    let step = r.scale(&-c0_inv.clone());
    let dim = n.dim();
    let mut term = Matrix::identity(dim);
    let mut sum = Matrix::zeros(dim);
    for _ in 0..cert.index {
        sum = &sum + &term;
        term = &term * &step;
    }
    Ok(sum.scale(&c0_inv))
}

/// Spectral data of `F(N)` for nilpotent `N`: a single eigenvalue `c0` with
/// multiplicity `n`, trace `n c0` and determinant `c0^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSummary<T> {
    pub spectrum_point: T,
    pub multiplicity: usize,
    pub trace: T,
    pub determinant: T,
}

/// Computes the spectral summary and cross-checks each closed form against a
/// direct computation (nilpotency of `F(N) - c0 I`, the literal diagonal sum,
/// and a Bareiss determinant).
pub fn spectral_summary<T: Scalar>(series: &TruncSeries<T>, n: &Matrix<T>) -> Result<SpectralSummary<T>> {
    let value = evaluate_series(series, n)?;
    let dim = n.dim();
    let c0 = series.constant_term().clone();

    let shifted = value.add_scalar(&-c0.clone());
    if shifted.nilpotency_index().is_err() {
        return Err(Error::InvariantViolation(format!(
            "F(N) - {c0} I is not nilpotent"
        )));
    }
    let trace = int::<T>(dim as i64) * c0.clone();
    if value.trace() != trace {
        return Err(Error::InvariantViolation(format!(
            "tr F(N) = {} differs from n c0 = {trace}",
            value.trace()
        )));
    }
    let determinant = pow(&c0, dim);
    let direct = value.determinant();
    if direct != determinant {
        return Err(Error::InvariantViolation(format!(
            "det F(N) = {direct} differs from c0^n = {determinant}"
        )));
    }
    Ok(SpectralSummary {
        spectrum_point: c0,
        multiplicity: dim,
        trace,
        determinant,
    })
}
