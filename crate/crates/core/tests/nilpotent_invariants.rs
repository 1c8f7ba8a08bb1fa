use nilcalc::depth::depth_factorization;
use nilcalc::random;
use nilcalc::{
    analyze_depth, composition_bound, depth_bound, evaluate_hypergeom, evaluate_series, invert_via_neumann,
    spectral_summary, ExactMatrix, ExactSeries, GaussianRational, Matrix, Order, TruncSeries,
};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type G = GaussianRational;
type Dense = Vec<Vec<G>>;

fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(G::zero(), |acc, k| acc + a[i][k].clone() * b[k][j].clone()))
                .collect()
        })
        .collect()
}

fn dense_identity(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { G::one() } else { G::zero() }).collect())
        .collect()
}

fn is_zero(a: &Dense) -> bool {
    a.iter().flatten().all(Zero::is_zero)
}

/// `sum_j c_j N^j` term by term, every power rebuilt from scratch.
fn naive_sum(coeffs: &[G], n: &ExactMatrix) -> Dense {
    let base = n.rows();
    let dim = n.dim();
    let mut out = vec![vec![G::zero(); dim]; dim];
    for (j, c) in coeffs.iter().enumerate() {
        let mut power = dense_identity(dim);
        for _ in 0..j {
            power = dense_mul(&power, &base);
        }
        for (row, prow) in out.iter_mut().zip(&power) {
            for (x, p) in row.iter_mut().zip(prow) {
                *x = x.clone() + c.clone() * p.clone();
            }
        }
    }
    out
}

/// Smallest `k` with `Q^k = 0`, counting `Q = 0` as 0.
fn oracle_index(q: &Dense) -> usize {
    if is_zero(q) {
        return 0;
    }
    let mut power = q.clone();
    let mut k = 1;
    while !is_zero(&power) {
        power = dense_mul(&power, q);
        k += 1;
        assert!(k <= q.len() + 1, "not nilpotent");
    }
    k
}

/// Leibniz expansion.
fn oracle_det(a: &Dense) -> G {
    fn go(a: &Dense, used: &mut Vec<bool>, row: usize) -> G {
        if row == a.len() {
            return G::one();
        }
        let mut total = G::zero();
        let mut sign = G::one();
        for col in 0..a.len() {
            if used[col] {
                continue;
            }
            if !a[row][col].is_zero() {
                used[col] = true;
                total = total + sign.clone() * a[row][col].clone() * go(a, used, row + 1);
                used[col] = false;
            }
            sign = -sign;
        }
        total
    }
    go(a, &mut vec![false; a.len()], 0)
}

fn minus_constant(mut a: Dense, c: &G) -> Dense {
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = row[i].clone() - c.clone();
    }
    a
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

#[test]
fn horner_matches_naive_and_extended_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x11);
    for _ in 0..250 {
        let dim = rng.gen_range(1..=6);
        let disguise = rng.gen_bool(0.5);
        let n = random::nilpotent(&mut rng, dim, disguise);
        let m = n.nilpotency_index().unwrap().index - 1;
        let series = random::series(&mut rng, m);
        let horner = evaluate_series(&series, &n).unwrap();
        assert_eq!(horner.rows(), naive_sum(series.coeffs(), &n));

        let extra = rng.gen_range(1..=4);
        let mut longer = series.coeffs().to_vec();
        longer.extend((0..extra).map(|_| random::gaussian(&mut rng)));
        let extended = TruncSeries::new(m + extra, longer.clone());
        assert_eq!(evaluate_series(&extended, &n).unwrap(), horner);
        assert_eq!(naive_sum(&longer, &n), horner.rows());
    }
}

#[test]
fn trace_and_determinant_are_universal() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x22);
    for _ in 0..220 {
        let dim = rng.gen_range(1..=6);
        let disguise = rng.gen_bool(0.5);
        let n = random::nilpotent(&mut rng, dim, disguise);
        let (upper, lower) = random::hypergeom_params(&mut rng);
        let value = evaluate_hypergeom(&upper, &lower, &n).unwrap();
        let rows = value.rows();
        let trace = (0..dim).fold(G::zero(), |acc, i| acc + rows[i][i].clone());
        assert_eq!(trace, G::from(dim as i64));
        assert_eq!(oracle_det(&rows), G::one());
        assert_eq!(value.determinant(), G::one());
    }
}

#[test]
fn spectral_summary_for_general_constants() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x23);
    for _ in 0..60 {
        let dim = rng.gen_range(1..=5);
        let n = random::nilpotent(&mut rng, dim, true);
        let m = n.nilpotency_index().unwrap().index - 1;
        let series = random::series(&mut rng, m);
        let c0 = series.constant_term().clone();
        let summary = spectral_summary(&series, &n).unwrap();
        assert_eq!(summary.multiplicity, dim);
        assert_eq!(summary.trace, c0.clone() * G::from(dim as i64));
        let want_det = (0..dim).fold(G::one(), |acc, _| acc * c0.clone());
        assert_eq!(summary.determinant, want_det.clone());
        assert_eq!(oracle_det(&evaluate_series(&series, &n).unwrap().rows()), want_det);
    }
}

/// Random `F` with contact order `r` at a random nilpotent `N`, checked
/// against an independent evaluation.
#[test]
fn depth_theorem_randomized() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x33);
    let mut full_block_r1 = 0;
    let mut beyond_m = 0;
    for _ in 0..600 {
        let dim = rng.gen_range(1..=6);
        let full_block = rng.gen_bool(0.4);
        let n = if full_block {
            let (p, p_inv) = random::unimodular(&mut rng, dim);
            &(&p * &Matrix::jordan_block(dim, G::zero())) * &p_inv
        } else {
            let disguise = rng.gen_bool(0.5);
            random::nilpotent(&mut rng, dim, disguise)
        };
        let m_plus_1 = n.nilpotency_index().unwrap().index;
        let m = m_plus_1 - 1;
        let r = rng.gen_range(1..=m_plus_1 + 1);
        let series = random::series_with_order(&mut rng, r, m.max(r));

        let q = minus_constant(naive_sum(series.coeffs(), &n), series.constant_term());
        let effective = oracle_index(&q);
        let bound = ceil_div(m_plus_1, r);
        assert!(effective <= bound);

        let mut power = dense_identity(dim);
        for k in 1..=m_plus_1 {
            power = dense_mul(&power, &q);
            if r * k >= m_plus_1 {
                assert!(is_zero(&power), "Q^{k} != 0 with r = {r}, m+1 = {m_plus_1}");
            }
        }
        if full_block && r == 1 && m >= 1 {
            assert_eq!(effective, m_plus_1);
            full_block_r1 += 1;
        }
        if r > m {
            assert!(is_zero(&q));
            beyond_m += 1;
        }

        let report = analyze_depth(&series, &n).unwrap();
        assert_eq!(report.contact_order, Order::Finite(r));
        assert_eq!((report.bound, report.effective_index), (bound, effective));
    }
    assert!(full_block_r1 > 20 && beyond_m > 50);
}

#[test]
fn factorization_through_n_to_the_r() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x44);
    for _ in 0..150 {
        let dim = rng.gen_range(1..=6);
        let n = random::nilpotent(&mut rng, dim, true);
        let m = n.nilpotency_index().unwrap().index - 1;
        let r = rng.gen_range(1..=m.max(1));
        let series = random::series_with_order(&mut rng, r, m.max(r));
        let (nr, h) = depth_factorization(&series, &n).unwrap().unwrap();
        let q = evaluate_series(&series, &n).unwrap().add_scalar(&-series.constant_term().clone());
        assert_eq!(&nr * &h, q);
        assert_eq!(&h * &nr, q);
        // H(N) has constant term c_r != 0, so it is invertible
        let tail = TruncSeries::new(m, series.coeffs()[r..].to_vec());
        let h_inv = invert_via_neumann(&tail, &n).unwrap();
        assert_eq!(&h * &h_inv, Matrix::identity(dim));
    }
    let constant = TruncSeries::constant(G::from(3), 2);
    assert!(depth_factorization(&constant, &Matrix::jordan_block(3, G::zero()))
        .unwrap()
        .is_none());
}

#[test]
fn neumann_inverse_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x55);
    for _ in 0..100 {
        let dim = rng.gen_range(1..=6);
        let n = random::nilpotent(&mut rng, dim, true);
        let m = n.nilpotency_index().unwrap().index - 1;
        let mut series = random::series(&mut rng, m);
        if series.constant_term().is_zero() {
            series = series.add(&ExactSeries::one(m)).unwrap();
        }
        let inv = invert_via_neumann(&series, &n).unwrap();
        let value = evaluate_series(&series, &n).unwrap();
        assert_eq!(&value * &inv, Matrix::identity(dim));
        assert_eq!(inv, evaluate_series(&series.invert().unwrap(), &n).unwrap());
    }
}

#[test]
fn composition_chain_randomized() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x66);
    for _ in 0..220 {
        let dim = rng.gen_range(1..=6);
        let disguise = rng.gen_bool(0.5);
        let n = random::nilpotent(&mut rng, dim, disguise);
        let m_plus_1 = n.nilpotency_index().unwrap().index;
        let m = m_plus_1 - 1;
        let cap = m.max(3);
        let r = rng.gen_range(1..=3);
        let s = rng.gen_range(1..=3);
        let outer = random::series_with_order(&mut rng, r, cap);
        let inner_raw = random::series_with_order(&mut rng, s, cap);
        let inner = inner_raw.nonconstant_part();

        let report = composition_bound(&outer, &inner, &n).unwrap();
        let inner_value = naive_sum(inner.coeffs(), &n);
        let mu_plus_1 = oracle_index(&inner_value);
        assert_eq!(report.mu_plus_1, mu_plus_1);

        // independent route: compose the series first, then evaluate
        let composed = outer.compose(&inner).unwrap();
        let q = minus_constant(naive_sum(composed.coeffs(), &n), outer.constant_term());
        assert_eq!(report.effective, oracle_index(&q));

        let refined = ceil_div(mu_plus_1, r);
        let coarse = ceil_div(ceil_div(m_plus_1, s), r);
        assert_eq!((report.refined_bound, report.coarse_bound), (refined, coarse));
        assert!(report.effective <= refined && refined <= coarse);
    }
}

#[test]
fn composition_worked_instances_on_j5() {
    let j5 = Matrix::jordan_block(5, G::zero());
    let ser = |coeffs: &[i64]| TruncSeries::new(4, coeffs.iter().map(|&c| G::from(c)));

    let a = composition_bound(&ser(&[1, 1]), &ser(&[0, 0, 1]), &j5).unwrap();
    assert_eq!((a.mu_plus_1, a.refined_bound, a.coarse_bound, a.effective), (3, 3, 3, 3));

    let b = composition_bound(&ser(&[1, 0, 1]), &ser(&[0, 0, 1]), &j5).unwrap();
    assert_eq!((b.refined_bound, b.effective), (2, 2));

    // identity inner function reduces to the plain depth analysis
    let f = ser(&[2, 0, 5, 1]);
    let c = composition_bound(&f, &TruncSeries::x(4), &j5).unwrap();
    let d = analyze_depth(&f, &j5).unwrap();
    assert_eq!((c.refined_bound, c.effective), (d.bound, d.effective_index));
}

/// Nested ceilings collapse: ceil(ceil(a/s)/r) = ceil(a/(rs)). So the two
/// bounds can only differ through mu+1 < ceil((m+1)/s).
#[test]
fn nested_ceilings_agree_and_refinement_needs_a_degenerate_inner() {
    for a in 1..=40 {
        for s in 1..=8 {
            for r in 1..=8 {
                assert_eq!(ceil_div(ceil_div(a, s), r), ceil_div(a, r * s));
                assert_eq!(depth_bound(depth_bound(a, Order::Finite(s)), Order::Finite(r)), ceil_div(a, r * s));
            }
        }
    }
    let j3 = Matrix::jordan_block(3, G::zero());
    let inner = TruncSeries::new(3, [G::zero(), G::zero(), G::zero(), G::one()]);
    let outer = TruncSeries::new(3, [G::zero(), G::one(), G::zero(), G::zero()]);
    let report = composition_bound(&outer, &inner, &j3).unwrap();
    assert_eq!((report.mu_plus_1, report.refined_bound, report.coarse_bound), (0, 0, 1));
}
