//! Seeded generators for exact test data: small rationals, nilpotent
//! matrices (optionally disguised by a unimodular similarity), Jordan
//! direct sums, and truncated series with a prescribed contact order.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::matrix::Matrix;
use crate::scalar::{GaussianRational, Rational};
use crate::series::TruncSeries;

/// Rational `p/q` with `|p| <= bound` and `1 <= q <= max_denom`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R, bound: i64, max_denom: i64) -> Rational {
    let p = rng.gen_range(-bound..=bound);
    let q = rng.gen_range(1..=max_denom);
    Rational::new(p.into(), q.into())
}

/// Real Gaussian rational with small numerator and denominator.
pub fn real<R: Rng + ?Sized>(rng: &mut R) -> GaussianRational {
    GaussianRational::real(rational(rng, 5, 4))
}

/// Gaussian rational; the imaginary part is nonzero about a third of the time.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> GaussianRational {
    let re = rational(rng, 5, 4);
    let im = if rng.gen_bool(1.0 / 3.0) {
        rational(rng, 3, 3)
    } else {
        Rational::zero()
    };
    GaussianRational::new(re, im)
}

pub fn nonzero_gaussian<R: Rng + ?Sized>(rng: &mut R) -> GaussianRational {
    loop {
        let v = gaussian(rng);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Strictly upper triangular matrix; each entry is nonzero with probability `density`.
pub fn strictly_upper<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> Matrix<GaussianRational> {
    Matrix::from_fn(n, |i, j| {
        if j > i && rng.gen_bool(density) {
            gaussian(rng)
        } else {
            GaussianRational::zero()
        }
    })
}

fn unit_triangular_inverse(m: &Matrix<GaussianRational>) -> Matrix<GaussianRational> {
    // m = I + S with S nilpotent, so m^-1 = sum_k (-S)^k
    let n = m.dim();
    let minus_s = &Matrix::identity(n) - m;
    let mut term = Matrix::identity(n);
    let mut sum = Matrix::zeros(n);
    for _ in 0..n {
        sum = &sum + &term;
        term = &term * &minus_s;
    }
    sum
}

/// Random integer matrix `P = L U` with unit triangular factors, together
/// with its exact inverse.
pub fn unimodular<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
) -> (Matrix<GaussianRational>, Matrix<GaussianRational>) {
    let entry = |rng: &mut R| GaussianRational::from(rng.gen_range(-2i64..=2));
    let lower = Matrix::from_fn(n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => GaussianRational::one(),
        std::cmp::Ordering::Greater => entry(rng),
        std::cmp::Ordering::Less => GaussianRational::zero(),
    });
    let upper = Matrix::from_fn(n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => GaussianRational::one(),
        std::cmp::Ordering::Less => entry(rng),
        std::cmp::Ordering::Greater => GaussianRational::zero(),
    });
    let p = &lower * &upper;
    let p_inv = &unit_triangular_inverse(&upper) * &unit_triangular_inverse(&lower);
    (p, p_inv)
}

/// Random nilpotent `n x n` matrix: strictly upper triangular, conjugated by
/// a unimodular matrix when `disguise` is set.
pub fn nilpotent<R: Rng + ?Sized>(rng: &mut R, n: usize, disguise: bool) -> Matrix<GaussianRational> {
    let density = rng.gen_range(0.3..=1.0);
    let t = strictly_upper(rng, n, density);
    if !disguise {
        return t;
    }
    let (p, p_inv) = unimodular(rng, n);
    &(&p * &t) * &p_inv
}

/// `J_{s1}(0) (+) J_{s2}(0) (+) ...`.
pub fn jordan_sum(sizes: &[usize]) -> Matrix<GaussianRational> {
    let mut blocks = sizes.iter().map(|&s| Matrix::jordan_block(s, GaussianRational::zero()));
    let first = blocks.next().expect("at least one block");
    blocks.fold(first, |acc, b| acc.direct_sum(&b))
}

/// Block sizes for a direct sum whose largest block is `n`, plus one or two
/// strictly smaller blocks of distinct sizes. Requires `n >= 2`.
pub fn mixed_block_sizes<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    assert!(n >= 2);
    let mut smaller: Vec<usize> = (1..n).collect();
    smaller.shuffle(rng);
    let extra = rng.gen_range(1..=2).min(smaller.len());
    let mut sizes = vec![n];
    sizes.extend_from_slice(&smaller[..extra]);
    sizes
}

/// Series of the given cap whose first non-constant coefficient is at
/// degree `r` (so `r <= cap`); later coefficients are arbitrary.
pub fn series_with_order<R: Rng + ?Sized>(rng: &mut R, r: usize, cap: usize) -> TruncSeries<GaussianRational> {
    assert!(r >= 1 && r <= cap);
    let coeffs = (0..=cap).map(|j| match j {
        0 => gaussian(rng),
        j if j < r => GaussianRational::zero(),
        j if j == r => nonzero_gaussian(rng),
        _ => gaussian(rng),
    });
    TruncSeries::new(cap, coeffs.collect::<Vec<_>>())
}

/// Arbitrary series of the given cap.
pub fn series<R: Rng + ?Sized>(rng: &mut R, cap: usize) -> TruncSeries<GaussianRational> {
    TruncSeries::new(cap, (0..=cap).map(|_| gaussian(rng)).collect::<Vec<_>>())
}

/// Hypergeometric parameter lists: up to 3 upper and 2 lower parameters.
/// Lower parameters avoid `0, -1, -2, ...` entirely so they are valid for
/// every truncation.
pub fn hypergeom_params<R: Rng + ?Sized>(rng: &mut R) -> (Vec<GaussianRational>, Vec<GaussianRational>) {
    let p = rng.gen_range(0..=3);
    let q = rng.gen_range(0..=2);
    let upper = (0..p)
        .map(|_| {
            if rng.gen_bool(0.2) {
                GaussianRational::from(-rng.gen_range(0i64..=4))
            } else {
                gaussian(rng)
            }
        })
        .collect();
    let lower = (0..q)
        .map(|_| loop {
            let b = gaussian(rng);
            use crate::scalar::NonpositiveInteger;
            if b.as_nonpositive_integer().is_none() {
                break b;
            }
        })
        .collect();
    (upper, lower)
}
