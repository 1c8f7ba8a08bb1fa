//! Truncated power series: the quotient ring `K[x]/(x^(cap+1))`.
//!
//! A series of cap `m` stores exactly `m + 1` coefficients. Binary operations
//! require equal caps; nothing is ever silently truncated to the smaller one.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pochhammer::{factorial, hypergeom_coefficient, validate_lower_params};
use crate::scalar::{int, pow, Scalar};

/// Order of the non-constant part of a series (its contact order at the
/// expansion point). `Infinite` when every non-constant coefficient vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(usize),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<usize> {
        match self {
            Order::Finite(r) => Some(r),
            Order::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Order::Infinite)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(r) => write!(f, "{r}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(r) => s.serialize_u64(*r as u64),
            Order::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(usize),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(r) if r >= 1 => Ok(Order::Finite(r)),
            Raw::Num(_) => Err(serde::de::Error::custom("contact order must be >= 1")),
            Raw::Text(t) if t == "inf" => Ok(Order::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad order {t:?}"))),
        }
    }
}

/// Coefficients `c_0..c_cap` of a series known modulo `x^(cap+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> TruncSeries<T> {
    /// Builds a series of the given cap, padding with zeros and dropping
    /// coefficients of degree above `cap` (they vanish in the quotient ring).
    pub fn new(cap: usize, coeffs: impl IntoIterator<Item = T>) -> Self {
        let mut c: Vec<T> = coeffs.into_iter().take(cap + 1).collect();
        c.resize(cap + 1, T::zero());
        Self { coeffs: c }
    }

    pub fn zero(cap: usize) -> Self {
        Self::new(cap, [])
    }

    pub fn constant(value: T, cap: usize) -> Self {
        Self::new(cap, [value])
    }

    pub fn one(cap: usize) -> Self {
        Self::constant(T::one(), cap)
    }

    /// `coeff * x^degree`, which is zero when `degree > cap`.
    pub fn monomial(coeff: T, degree: usize, cap: usize) -> Self {
        let mut s = Self::zero(cap);
        if degree <= cap {
            s.coeffs[degree] = coeff;
        }
        s
    }

    /// The indeterminate `x` itself.
    pub fn x(cap: usize) -> Self {
        Self::monomial(T::one(), 1, cap)
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &T {
        &self.coeffs[j]
    }

    pub fn constant_term(&self) -> &T {
        &self.coeffs[0]
    }

    /// Re-caps the series: truncation when shrinking, zero padding when growing.
    pub fn with_cap(&self, cap: usize) -> Self {
        Self::new(cap, self.coeffs.iter().cloned())
    }

    /// The series minus its constant term.
    pub fn nonconstant_part(&self) -> Self {
        let mut s = self.clone();
        s.coeffs[0] = T::zero();
        s
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_caps(&self, other: &Self) -> Result<()> {
        if self.cap() != other.cap() {
            return Err(Error::CapMismatch {
                left: self.cap(),
                right: other.cap(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_caps(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_caps(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_caps(other)?;
        let cap = self.cap();
        let mut out = vec![T::zero(); cap + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=cap - i].iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Ok(Self { coeffs: out })
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::one(self.cap());
        for _ in 0..exp {
            acc = acc.mul(self).expect("same cap");
        }
        acc
    }

    /// Smallest `j >= 1` with `c_j != 0`, over the stored coefficients.
    pub fn order(&self) -> Order {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, c)| !c.is_zero())
            .map_or(Order::Infinite, |(j, _)| Order::Finite(j))
    }

    /// Multiplicative inverse via the finite Neumann series
    /// `c0^-1 * sum_k (-c0^-1 R)^k` with `R = F - c0`.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.constant_term().clone();
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let c0_inv = T::one() / c0;
        let step = self.nonconstant_part().scale(&-c0_inv.clone());
        let mut term = Self::one(self.cap());
        let mut sum = Self::zero(self.cap());
        for _ in 0..=self.cap() {
            sum = sum.add(&term)?;
            term = term.mul(&step)?;
        }
        Ok(sum.scale(&c0_inv))
    }

    /// `F(G(x))` truncated at the shared cap. Requires `G(0) = 0`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_caps(inner)?;
        if !inner.constant_term().is_zero() {
            return Err(Error::NonzeroConstantInner {
                constant: inner.constant_term().to_string(),
            });
        }
        let cap = self.cap();
        let mut acc = Self::zero(cap);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner)?.add(&Self::constant(c.clone(), cap))?;
        }
        Ok(acc)
    }

    /// Taylor coefficients of `pFq(upper; lower; x)` up to degree `cap`.
    pub fn hypergeom(upper: &[T], lower: &[T], cap: usize) -> Result<Self> {
        validate_lower_params(lower, cap)?;
        let coeffs = (0..=cap)
            .map(|j| hypergeom_coefficient(upper, lower, j))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coeffs })
    }

    /// Coefficients `t^j / j!` of `exp(t x)`.
    pub fn exp_scaled(t: &T, cap: usize) -> Self {
        Self {
            coeffs: (0..=cap).map(|j| pow(t, j) / factorial(j)).collect(),
        }
    }

    /// Expands the polynomial `sum_k poly[k] z^k` around `z = center`,
    /// returning the coefficients of `G(w) = F(center + w)` up to `cap`.
    ///
    /// The coefficient of `w^j` is `sum_{k>=j} poly[k] C(k, j) center^(k-j)`.
    pub fn recenter_poly(poly: &[T], center: &T, cap: usize) -> Self {
        let mut coeffs = vec![T::zero(); cap + 1];
        for (k, p) in poly.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let mut binom = T::one();
            for (j, c) in coeffs.iter_mut().enumerate().take(k + 1) {
                if j > 0 {
                    binom = binom * int((k - j + 1) as i64) / int(j as i64);
                }
                *c = c.clone() + p.clone() * binom.clone() * pow(center, k - j);
            }
        }
        Self { coeffs }
    }
}

impl<T: Scalar> fmt::Display for TruncSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.cap() + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr<T> {
    cap: usize,
    coeffs: Vec<T>,
}

impl<T: Scalar + Serialize> Serialize for TruncSeries<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            cap: self.cap(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for TruncSeries<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SeriesRepr::<T>::deserialize(d)?;
        if repr.coeffs.len() != repr.cap + 1 {
            return Err(serde::de::Error::custom(format!(
                "series with cap {} needs {} coefficients, got {}",
                repr.cap,
                repr.cap + 1,
                repr.coeffs.len()
            )));
        }
        Ok(Self {
            coeffs: repr.coeffs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as G;
    use num_traits::One;

    fn g(s: &str) -> G {
        s.parse().unwrap()
    }

    fn s(cap: usize, coeffs: &[&str]) -> TruncSeries<G> {
        TruncSeries::new(cap, coeffs.iter().map(|c| g(c)))
    }

    #[test]
    fn addition() {
        assert_eq!(s(2, &["1", "1"]).add(&s(2, &["1", "-1"])).unwrap(), s(2, &["2"]));
        let f = s(3, &["1/2", "i", "0", "7"]);
        assert_eq!(f.add(&TruncSeries::zero(3)).unwrap(), f);
        assert_eq!(s(2, &["0", "0", "1"]).add(&s(2, &["0", "1"])).unwrap(), s(2, &["0", "1", "1"]));
        assert_eq!(
            s(2, &["1"]).add(&s(3, &["1"])),
            Err(Error::CapMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn multiplication() {
        assert_eq!(s(1, &["0", "1"]).mul(&s(1, &["0", "1"])).unwrap(), s(1, &[]));
        assert_eq!(
            s(2, &["1", "1"]).mul(&s(2, &["1", "-1"])).unwrap(),
            s(2, &["1", "0", "-1"])
        );
        assert_eq!(
            s(2, &["1", "1"]).mul(&s(2, &["1", "-1", "1"])).unwrap(),
            s(2, &["1"])
        );
        assert!(s(1, &[]).mul(&s(2, &[])).is_err());
    }

    #[test]
    fn order() {
        assert_eq!(s(2, &["1", "3/5", "1/5"]).order(), Order::Finite(1));
        assert_eq!(s(2, &["1", "0", "1"]).order(), Order::Finite(2));
        assert_eq!(s(5, &["1"]).order(), Order::Infinite);
        assert_eq!(s(0, &["4"]).order(), Order::Infinite);
    }

    #[test]
    fn inversion() {
        assert_eq!(s(1, &["1", "1"]).invert().unwrap(), s(1, &["1", "-1"]));
        assert_eq!(s(2, &["1", "1"]).invert().unwrap(), s(2, &["1", "-1", "1"]));
        assert_eq!(s(3, &["0", "1"]).invert(), Err(Error::NotInvertible));
        let f = s(4, &["2i", "1/3", "-5", "0", "1+i"]);
        assert_eq!(f.mul(&f.invert().unwrap()).unwrap(), TruncSeries::one(4));
    }

    #[test]
    fn composition() {
        assert_eq!(
            s(4, &["1", "1"]).compose(&s(4, &["0", "0", "1"])).unwrap(),
            s(4, &["1", "0", "1"])
        );
        let f = s(3, &["3", "-1/2", "i", "2"]);
        assert_eq!(f.compose(&TruncSeries::x(3)).unwrap(), f);
        assert_eq!(
            s(2, &["1", "1", "1"]).compose(&TruncSeries::monomial(G::one(), 3, 2)).unwrap(),
            s(2, &["1"])
        );
        assert!(matches!(
            f.compose(&s(3, &["1", "1"])),
            Err(Error::NonzeroConstantInner { .. })
        ));
    }

    #[test]
    fn hypergeometric_series() {
        assert_eq!(
            TruncSeries::hypergeom(&[g("3")], &[g("5")], 2).unwrap(),
            s(2, &["1", "3/5", "1/5"])
        );
        assert_eq!(
            TruncSeries::hypergeom(&[g("-1"), g("4")], &[g("3")], 2).unwrap(),
            s(2, &["1", "-4/3"])
        );
        for b in ["2", "-7/2", "1+i"] {
            assert_eq!(
                TruncSeries::hypergeom(&[g("0")], &[g(b)], 6).unwrap(),
                TruncSeries::one(6)
            );
        }
        assert!(TruncSeries::hypergeom(&[g("1")], &[g("-1")], 2).is_err());
    }

    #[test]
    fn exponential_series() {
        assert_eq!(TruncSeries::exp_scaled(&g("1"), 2), s(2, &["1", "1", "1/2"]));
        assert_eq!(TruncSeries::exp_scaled(&g("0"), 5), TruncSeries::one(5));
        assert_eq!(TruncSeries::exp_scaled(&g("2"), 3), s(3, &["1", "2", "2", "4/3"]));
    }

    #[test]
    fn polynomial_recentering() {
        let p: Vec<G> = ["5", "-4", "1"].iter().map(|c| g(c)).collect();
        assert_eq!(TruncSeries::recenter_poly(&p, &g("2"), 2), s(2, &["1", "0", "1"]));
        let c = [g("7/3")];
        assert_eq!(TruncSeries::recenter_poly(&c, &g("-1+i"), 3), s(3, &["7/3"]));
        let cube: Vec<G> = ["-8", "12", "-6", "1"].iter().map(|c| g(c)).collect();
        assert_eq!(TruncSeries::recenter_poly(&cube, &g("2"), 3), s(3, &["0", "0", "0", "1"]));
        // truncation below the polynomial degree
        assert_eq!(TruncSeries::recenter_poly(&cube, &g("2"), 2), s(2, &[]));
    }

    #[test]
    fn json_shape() {
        let f = s(1, &["1", "1/2"]);
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"cap":1,"coeffs":[{"re":"1","im":"0"},{"re":"1/2","im":"0"}]}"#);
        let back: TruncSeries<G> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<TruncSeries<G>>(r#"{"cap":2,"coeffs":[1]}"#).is_err());
        assert_eq!(serde_json::to_string(&Order::Infinite).unwrap(), r#""inf""#);
    }
}
