//! Rising factorials and generalized hypergeometric coefficients.

use crate::error::{Error, Result};
use crate::scalar::{int, Scalar};

/// Rising factorial `(a)_j = a (a+1) ... (a+j-1)`, with `(a)_0 = 1`.
pub fn pochhammer<T: Scalar>(a: &T, j: usize) -> T {
    (0..j).fold(T::one(), |acc, k| acc * (a.clone() + int(k as i64)))
}

/// `j!` in the scalar field.
pub fn factorial<T: Scalar>(j: usize) -> T {
    (1..=j).fold(T::one(), |acc, k| acc * int(k as i64))
}

/// Coefficient of `z^j` in `pFq(upper; lower; z)`:
/// `prod (a_i)_j / (prod (b_l)_j * j!)`.
pub fn hypergeom_coefficient<T: Scalar>(upper: &[T], lower: &[T], j: usize) -> Result<T> {
    let mut denom = factorial::<T>(j);
    for (index, b) in lower.iter().enumerate() {
        let p = pochhammer(b, j);
        if p.is_zero() {
            return Err(Error::ZeroLowerPochhammer { index, j });
        }
        denom = denom * p;
    }
    let numer = upper
        .iter()
        .fold(T::one(), |acc, a| acc * pochhammer(a, j));
    Ok(numer / denom)
}

/// Checks `(b_l)_j != 0` for every lower parameter and every `j = 0..=m`.
///
/// On failure reports the first offending pair, scanning `j` upwards.
pub fn validate_lower_params<T: Scalar>(lower: &[T], m: usize) -> Result<()> {
    // (b)_j vanishes iff b is one of 0, -1, ..., -(j-1); track running products
    let mut running: Vec<T> = vec![T::one(); lower.len()];
    for j in 1..=m {
        for (index, b) in lower.iter().enumerate() {
            running[index] = running[index].clone() * (b.clone() + int((j - 1) as i64));
            if running[index].is_zero() {
                return Err(Error::ZeroLowerPochhammer { index, j });
            }
        }
    }
    Ok(())
}
