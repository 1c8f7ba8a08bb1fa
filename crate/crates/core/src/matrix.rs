//! Dense square matrices over a [`Scalar`] field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense `n x n` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    entries: Vec<T>,
}

/// Proof of nilpotency: `N^index = 0` and `witness_power = N^(index-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NilpotencyCertificate<T> {
    pub index: usize,
    pub witness_power: Matrix<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be positive");
        Self {
            n,
            entries: vec![T::zero(); n * n],
        }
    }

    pub fn scalar(value: T, n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = value.clone();
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(T::one(), n)
    }

    /// `lambda` on the diagonal, ones on the superdiagonal.
    pub fn jordan_block(n: usize, lambda: T) -> Self {
        let mut m = Self::scalar(lambda, n);
        for i in 0..n.saturating_sub(1) {
            m.entries[i * n + i + 1] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("matrix has no rows".into()));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
        Ok(Self {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(n >= 1, "matrix dimension must be positive");
        Self {
            n,
            entries: (0..n * n).map(|k| f(k / n, k % n)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.entries[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: T) {
        self.entries[row * self.n + col] = value;
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &T)> {
        self.entries
            .iter()
            .enumerate()
            .find(|(_, e)| !e.is_zero())
            .map(|(k, e)| (k / self.n, k % self.n, e))
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|e| e.clone() * factor.clone()).collect(),
        }
    }

    /// `self + c I`.
    pub fn add_scalar(&self, c: &T) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.entries[i * self.n + i] = m.entries[i * self.n + i].clone() + c.clone();
        }
        m
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Block-diagonal matrix `self (+) other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        Self::from_fn(n, |i, j| match (i < self.n, j < self.n) {
            (true, true) => self.get(i, j).clone(),
            (false, false) => other.get(i - self.n, j - self.n).clone(),
            _ => T::zero(),
        })
    }

    /// Determinant by fraction-free (Bareiss) elimination with row pivoting.
    pub fn determinant(&self) -> T {
        let n = self.n;
        let mut a = self.rows();
        let mut negate = false;
        let mut prev = T::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        negate = !negate;
                    }
                    None => return T::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone())
                        / prev.clone();
                    a[i][j] = v;
                }
                a[i][k] = T::zero();
            }
            prev = a[k][k].clone();
        }
        let det = if n == 0 { T::one() } else { a[n - 1][n - 1].clone() };
        if negate {
            -det
        } else {
            det
        }
    }

    /// Smallest `s` with `N^s = 0`, found by explicit powering up to `N^n`.
    ///
    /// The zero matrix has index 1.
    pub fn nilpotency_index(&self) -> Result<NilpotencyCertificate<T>> {
        let mut previous = Self::identity(self.n);
        let mut power = self.clone();
        for s in 1..=self.n {
            if power.is_zero() {
                return Ok(NilpotencyCertificate {
                    index: s,
                    witness_power: previous,
                });
            }
            let next = &power * self;
            previous = std::mem::replace(&mut power, next);
        }
        // `previous` now holds N^n
        let (row, col, entry) = previous.first_nonzero().expect("N^n is nonzero");
        Err(Error::NotNilpotent {
            dimension: self.n,
            row,
            col,
            entry: entry.to_string(),
        })
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        Matrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        Matrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = Matrix::<T>::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] = out.entries[i * n + j].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        Matrix {
            n: self.n,
            entries: self.entries.iter().map(|e| -e.clone()).collect(),
        }
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        let width = cells.iter().map(|c| c.len()).max().unwrap_or(1);
        for (i, row) in cells.chunks(self.n).enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{c:>width$}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr<T> {
    n: usize,
    entries: Vec<Vec<T>>,
}

impl<T: Scalar + Serialize> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            n: self.n,
            entries: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for Matrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::<T>::deserialize(d)?;
        if repr.entries.len() != repr.n {
            return Err(serde::de::Error::custom(format!(
                "declared n = {} but found {} rows",
                repr.n,
                repr.entries.len()
            )));
        }
        Matrix::from_rows(repr.entries).map_err(serde::de::Error::custom)
    }
}
