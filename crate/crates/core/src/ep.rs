//! Exceptional points `H = lambda I + N` with `N` nilpotent.
//!
//! Functions of `H` are handled through their expansion around `lambda`:
//! a caller supplies `G(w) = F(lambda + w)` as a truncated series and then
//! `F(H) = G(N)`. The exponential prefactor of the propagator stays symbolic
//! as its exponent `lambda t`.

use serde::{Deserialize, Serialize};

use crate::calculus::evaluate_series;
use crate::depth::{depth_bound, effective_index};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::pochhammer::factorial;
use crate::scalar::{int, pow, GaussianRational, Scalar};
use crate::series::{Order, TruncSeries};

/// Decomposition `H = lambda I + N` with `N` of nilpotency index `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExceptionalPoint<T> {
    pub lambda: T,
    pub nilpotent: Matrix<T>,
    pub order: usize,
}

impl<T: Scalar> ExceptionalPoint<T> {
    pub fn dimension(&self) -> usize {
        self.nilpotent.dim()
    }

    /// `m` in `N^(m+1) = 0`.
    pub fn m(&self) -> usize {
        self.order - 1
    }

    pub fn hamiltonian(&self) -> Matrix<T> {
        self.nilpotent.add_scalar(&self.lambda)
    }

    pub fn summary(&self) -> EpSummary<T> {
        EpSummary {
            lambda: self.lambda.clone(),
            order: self.order,
            dimension: self.dimension(),
        }
    }
}

/// Splits `H` into `lambda I + N` with `lambda = tr(H) / n`, certifying that
/// `N` is nilpotent. Fails when `H` has more than one distinct eigenvalue.
pub fn ep_decompose<T: Scalar>(h: &Matrix<T>) -> Result<ExceptionalPoint<T>> {
    let n = h.dim();
    let lambda = h.trace() / int(n as i64);
    let nilpotent = h.add_scalar(&-lambda.clone());
    match nilpotent.nilpotency_index() {
        Ok(cert) => Ok(ExceptionalPoint {
            lambda,
            nilpotent,
            order: cert.index,
        }),
        Err(Error::NotNilpotent {
            dimension,
            row,
            col,
            entry,
        }) => Err(Error::NotExceptionalPoint {
            lambda: lambda.to_string(),
            power: dimension,
            row,
            col,
            entry,
        }),
        Err(e) => Err(e),
    }
}

/// Gain-loss Hamiltonian `[[omega - i gamma, kappa], [kappa, omega + i gamma]]`.
pub fn pt_symmetric_2x2(
    omega: GaussianRational,
    gamma: GaussianRational,
    kappa: GaussianRational,
) -> Matrix<GaussianRational> {
    let ig = GaussianRational::i() * gamma;
    Matrix::from_rows(vec![
        vec![omega.clone() - ig.clone(), kappa.clone()],
        vec![kappa, omega + ig],
    ])
    .expect("2x2")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpSummary<T> {
    pub lambda: T,
    pub order: usize,
    pub dimension: usize,
}

/// Effect of a function on an exceptional point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpReport<T> {
    pub ep: EpSummary<T>,
    pub contact_order: Order,
    pub depth_before: usize,
    pub depth_bound_after: usize,
    pub depth_effective_after: usize,
    pub annihilated: bool,
    pub traced_pole_order: usize,
    pub matrix_pole_order: usize,
    /// `m + 1 - r`, saturating at 0.
    pub pole_bound: usize,
}

/// `F(H)` from the recentered series `G(w) = F(lambda + w)`.
pub fn evaluate_at_ep<T: Scalar>(ep: &ExceptionalPoint<T>, recentered: &TruncSeries<T>) -> Result<Matrix<T>> {
    evaluate_series(recentered, &ep.nilpotent)
}

/// Depth reduction, annihilation and pole orders for `F` at an exceptional point.
pub fn apply_function_at_ep<T: Scalar>(
    ep: &ExceptionalPoint<T>,
    recentered: &TruncSeries<T>,
) -> Result<EpReport<T>> {
    let value = evaluate_at_ep(ep, recentered)?;
    let f_lambda = recentered.constant_term().clone();
    let q = value.add_scalar(&-f_lambda);
    let r = recentered.order();
    let m_plus_1 = ep.order;
    let bound = depth_bound(m_plus_1, r);
    let effective = effective_index(&q)?;
    let annihilated = q.is_zero();

    if effective > bound {
        return Err(Error::InvariantViolation(format!(
            "depth after F is {effective}, above the bound {bound}"
        )));
    }
    let flat_enough = r.finite().is_none_or(|r| r >= m_plus_1);
    if annihilated != flat_enough {
        return Err(Error::InvariantViolation(format!(
            "annihilation is {annihilated} but contact order is {r} at order {m_plus_1}"
        )));
    }

    let resolvent = modified_resolvent(ep, recentered)?;
    let pole_bound = match r {
        Order::Finite(r) => m_plus_1.saturating_sub(r),
        Order::Infinite => 0,
    };

    Ok(EpReport {
        ep: ep.summary(),
        contact_order: r,
        depth_before: m_plus_1,
        depth_bound_after: bound,
        depth_effective_after: effective,
        annihilated,
        traced_pole_order: resolvent.traced_pole_order,
        matrix_pole_order: resolvent.matrix_pole_order,
        pole_bound,
    })
}

/// `F(H) = F(lambda) I`, decided from the coefficients `1..order-1` of the
/// recentered series and cross-checked on the matrix.
pub fn annihilation_check<T: Scalar>(ep: &ExceptionalPoint<T>, recentered: &TruncSeries<T>) -> Result<bool> {
    let value = evaluate_at_ep(ep, recentered)?;
    let by_coefficients = recentered.coeffs()[1..ep.order].iter().all(|c| c.is_zero());
    let by_matrix = value.add_scalar(&-recentered.constant_term().clone()).is_zero();
    if by_coefficients != by_matrix {
        return Err(Error::InvariantViolation(
            "coefficient and matrix annihilation tests disagree".into(),
        ));
    }
    Ok(by_matrix)
}

/// `U(t) = e^(lambda t) sum_j t^j M_j` with `M_j = N^j / j!`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct EvolutionPolynomial<T> {
    pub lambda: T,
    #[serde(rename = "coeffs")]
    pub matrix_coeffs: Vec<Matrix<T>>,
}

impl<T: Scalar> EvolutionPolynomial<T> {
    /// `sum_j t^j M_j`, the propagator without its scalar prefactor.
    pub fn polynomial_part(&self, t: &T) -> Matrix<T> {
        let n = self.matrix_coeffs[0].dim();
        self.matrix_coeffs
            .iter()
            .rev()
            .fold(Matrix::zeros(n), |acc, m| &acc.scale(t) + m)
    }
}

pub fn time_evolution<T: Scalar>(ep: &ExceptionalPoint<T>) -> EvolutionPolynomial<T> {
    let mut power = Matrix::identity(ep.dimension());
    let mut coeffs = Vec::with_capacity(ep.order);
    for j in 0..ep.order {
        coeffs.push(power.scale(&(T::one() / factorial::<T>(j))));
        power = &power * &ep.nilpotent;
    }
    EvolutionPolynomial {
        lambda: ep.lambda.clone(),
        matrix_coeffs: coeffs,
    }
}

/// `U(t)` at a specific time: prefactor exponent `lambda t` and the exact
/// polynomial part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct EvolutionAt<T> {
    pub scalar_prefactor_exponent: T,
    pub polynomial_part: Matrix<T>,
}

pub fn evolution_at<T: Scalar>(ep: &ExceptionalPoint<T>, t: &T) -> EvolutionAt<T> {
    EvolutionAt {
        scalar_prefactor_exponent: ep.lambda.clone() * t.clone(),
        polynomial_part: time_evolution(ep).polynomial_part(t),
    }
}

/// Principal part `sum_j coeffs[j] / (z - lambda)^(j+1)` of a Laurent expansion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentExpansion<T, C> {
    pub lambda: T,
    pub pole_order: usize,
    pub coeffs: Vec<C>,
}

fn pole_order<C>(coeffs: &[C], is_zero: impl Fn(&C) -> bool) -> usize {
    coeffs.iter().rposition(|c| !is_zero(c)).map_or(0, |j| j + 1)
}

impl<T: Scalar> LaurentExpansion<T, Matrix<T>> {
    fn from_matrices(lambda: T, coeffs: Vec<Matrix<T>>) -> Self {
        Self {
            lambda,
            pole_order: pole_order(&coeffs, Matrix::is_zero),
            coeffs,
        }
    }

    /// Sums the expansion at `z != lambda`.
    pub fn evaluate(&self, z: &T) -> Matrix<T> {
        let inv = T::one() / (z.clone() - self.lambda.clone());
        let n = self.coeffs[0].dim();
        self.coeffs
            .iter()
            .enumerate()
            .fold(Matrix::zeros(n), |acc, (j, c)| &acc + &c.scale(&pow(&inv, j + 1)))
    }
}

impl<T: Scalar> LaurentExpansion<T, T> {
    fn from_scalars(lambda: T, coeffs: Vec<T>) -> Self {
        Self {
            lambda,
            pole_order: pole_order(&coeffs, T::is_zero),
            coeffs,
        }
    }

    pub fn evaluate(&self, z: &T) -> T {
        let inv = T::one() / (z.clone() - self.lambda.clone());
        self.coeffs
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (j, c)| acc + c.clone() * pow(&inv, j + 1))
    }
}

/// `(zI - H)^-1 = sum_{j<=m} N^j / (z - lambda)^(j+1)`.
pub fn resolvent_expansion<T: Scalar>(ep: &ExceptionalPoint<T>) -> LaurentExpansion<T, Matrix<T>> {
    let mut power = Matrix::identity(ep.dimension());
    let mut coeffs = Vec::with_capacity(ep.order);
    for _ in 0..ep.order {
        coeffs.push(power.clone());
        power = &power * &ep.nilpotent;
    }
    LaurentExpansion::from_matrices(ep.lambda.clone(), coeffs)
}

/// `F(H) (zI - H)^-1`, both traced (a scalar rational function) and as a matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct ModifiedResolvent<T> {
    pub traced: LaurentExpansion<T, T>,
    pub matrix_valued: LaurentExpansion<T, Matrix<T>>,
    pub traced_pole_order: usize,
    pub matrix_pole_order: usize,
}

/// Coefficients `tr(F(H) N^j)` and `F(H) N^j` for `j = 0..=m`.
///
/// Checks the pole bounds that hold unconditionally: for contact order
/// `r <= m` the traced pole order is at most `m + 1 - r`; for `r > m` the
/// traced part is `F(lambda) n / (z - lambda)`; with `F(lambda) = 0` the
/// matrix-valued pole order is at most `m + 1 - r`.
pub fn modified_resolvent<T: Scalar>(
    ep: &ExceptionalPoint<T>,
    recentered: &TruncSeries<T>,
) -> Result<ModifiedResolvent<T>> {
    let value = evaluate_at_ep(ep, recentered)?;
    let mut matrices = Vec::with_capacity(ep.order);
    let mut current = value;
    for _ in 0..ep.order {
        let next = &current * &ep.nilpotent;
        matrices.push(std::mem::replace(&mut current, next));
    }
    let traces = matrices.iter().map(Matrix::trace).collect();
    let traced = LaurentExpansion::from_scalars(ep.lambda.clone(), traces);
    let matrix_valued = LaurentExpansion::from_matrices(ep.lambda.clone(), matrices);

    let m_plus_1 = ep.order;
    let f_lambda_zero = recentered.constant_term().is_zero();
    let violation = match recentered.order() {
        Order::Finite(r) if r < m_plus_1 => traced.pole_order > m_plus_1 - r,
        _ => traced.pole_order != usize::from(!f_lambda_zero),
    };
    let linear_bound = recentered
        .order()
        .finite()
        .map_or(0, |r| m_plus_1.saturating_sub(r));
    if violation || matrix_valued.pole_order > m_plus_1 || (f_lambda_zero && matrix_valued.pole_order > linear_bound) {
        return Err(Error::InvariantViolation(format!(
            "pole orders traced {} / matrix {} exceed their bounds",
            traced.pole_order, matrix_valued.pole_order
        )));
    }

    Ok(ModifiedResolvent {
        traced_pole_order: traced.pole_order,
        matrix_pole_order: matrix_valued.pole_order,
        traced,
        matrix_valued,
    })
}
