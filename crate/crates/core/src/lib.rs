//! Exact functional calculus for nilpotent matrices and exceptional points.
//!
//! A formal power series evaluated at a nilpotent `N` with `N^(m+1) = 0`
//! collapses to the polynomial `sum_{j<=m} c_j N^j`. This crate computes such
//! evaluations exactly (generalized hypergeometric functions included),
//! measures how many Jordan levels of `N` survive in `F(N) - F(0) I`, and
//! applies the same machinery to Hamiltonians `H = lambda I + N` at
//! exceptional points: propagators, resolvents and their pole structure.
//!
//! The algebra is generic over [`Scalar`]; the aliases below fix the exact
//! Gaussian-rational instance used throughout the CLI and tests.

pub mod calculus;
pub mod depth;
pub mod ep;
pub mod error;
pub mod function;
pub mod matrix;
pub mod pochhammer;
pub mod random;
pub mod scalar;
pub mod scan;
pub mod series;
pub mod verify;

pub use calculus::{evaluate_hypergeom, evaluate_series, invert_via_neumann, spectral_summary, SpectralSummary};
pub use depth::{
    analyze_depth, classify_termination, composition_bound, depth_bound, effective_index, CompositionReport,
    DepthReport, Mechanism, TerminationClassification,
};
pub use ep::{
    annihilation_check, apply_function_at_ep, ep_decompose, evolution_at, modified_resolvent, pt_symmetric_2x2,
    resolvent_expansion, time_evolution, EpReport, EvolutionPolynomial, ExceptionalPoint, LaurentExpansion,
};
pub use error::{Error, Result};
pub use function::FunctionSpec;
pub use matrix::{Matrix, NilpotencyCertificate};
pub use pochhammer::{hypergeom_coefficient, pochhammer, validate_lower_params};
pub use scalar::{GaussianRational, Rational, Scalar};
pub use series::{Order, TruncSeries};

/// Dense matrix over the Gaussian rationals.
pub type ExactMatrix = Matrix<GaussianRational>;
/// Truncated series over the Gaussian rationals.
pub type ExactSeries = TruncSeries<GaussianRational>;
/// Exceptional point over the Gaussian rationals.
pub type ExactExceptionalPoint = ExceptionalPoint<GaussianRational>;
/// Dense matrix over plain rationals.
pub type RationalMatrix = Matrix<Rational>;
/// Truncated series over plain rationals.
pub type RationalSeries = TruncSeries<Rational>;
/// Floating-point instance; exact only on small integer data.
pub type FloatMatrix = Matrix<f64>;
/// Floating-point truncated series.
pub type FloatSeries = TruncSeries<f64>;
