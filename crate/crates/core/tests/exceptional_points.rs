use nilcalc::ep::evaluate_at_ep;
use nilcalc::random;
use nilcalc::{
    annihilation_check, apply_function_at_ep, ep_decompose, evolution_at, modified_resolvent, pt_symmetric_2x2,
    resolvent_expansion, time_evolution, Error, ExactMatrix, ExactSeries, GaussianRational, Matrix, Order,
    TruncSeries,
};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type G = GaussianRational;

/// `(lambda, N, H = lambda I + N)`; with probability `p_full` the nilpotent
/// part is a disguised single Jordan block.
fn random_ep(rng: &mut ChaCha8Rng, dim: usize, p_full: f64) -> (G, ExactMatrix, ExactMatrix) {
    let lambda = random::gaussian(rng);
    let n = if rng.gen_bool(p_full) {
        let (p, p_inv) = random::unimodular(rng, dim);
        &(&p * &Matrix::jordan_block(dim, G::zero())) * &p_inv
    } else {
        let disguise = rng.gen_bool(0.5);
        random::nilpotent(rng, dim, disguise)
    };
    let h = n.add_scalar(&lambda);
    (lambda, n, h)
}

/// `p(H)` by Horner directly on `H`, never touching the decomposition.
fn poly_at(poly: &[G], h: &ExactMatrix) -> ExactMatrix {
    poly.iter()
        .rev()
        .fold(Matrix::zeros(h.dim()), |acc, c| (&acc * h).add_scalar(c))
}

fn index_of(q: &ExactMatrix) -> usize {
    nilcalc::effective_index(q).unwrap()
}

#[test]
fn decomposition_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe1);
    for _ in 0..150 {
        let dim = rng.gen_range(1..=6);
        let (lambda, n, h) = random_ep(&mut rng, dim, 0.3);
        let ep = ep_decompose(&h).unwrap();
        assert_eq!(ep.lambda, lambda);
        assert_eq!(ep.nilpotent, n);
        assert_eq!(ep.order, n.nilpotency_index().unwrap().index);
        assert_eq!(ep.hamiltonian(), h);
    }
}

#[test]
fn distinct_eigenvalues_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe2);
    for _ in 0..50 {
        let dim = rng.gen_range(2..=5);
        let a = random::gaussian(&mut rng);
        let b = loop {
            let b = random::gaussian(&mut rng);
            if b != a {
                break b;
            }
        };
        let mut h = random::strictly_upper(&mut rng, dim, 0.5);
        for i in 0..dim {
            h.set(i, i, if i == 0 { b.clone() } else { a.clone() });
        }
        let (p, p_inv) = random::unimodular(&mut rng, dim);
        let disguised = &(&p * &h) * &p_inv;
        assert!(matches!(ep_decompose(&disguised), Err(Error::NotExceptionalPoint { .. })));
    }
}

/// Polynomials go through recentering, so the EP path is compared against
/// evaluating the polynomial at `H` itself.
#[test]
fn polynomials_at_eps_match_direct_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe3);
    for _ in 0..120 {
        let dim = rng.gen_range(1..=5);
        let (_, _, h) = random_ep(&mut rng, dim, 0.0);
        let ep = ep_decompose(&h).unwrap();
        let degree = rng.gen_range(0..=6);
        let poly: Vec<G> = (0..=degree).map(|_| random::gaussian(&mut rng)).collect();
        let recentered = TruncSeries::recenter_poly(&poly, &ep.lambda, ep.m().max(degree));
        assert_eq!(evaluate_at_ep(&ep, &recentered).unwrap(), poly_at(&poly, &h));
    }
}

#[test]
fn depth_reduction_and_annihilation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe4);
    let (mut annihilated, mut kept) = (0, 0);
    for _ in 0..300 {
        let dim = rng.gen_range(1..=6);
        let (_, _, h) = random_ep(&mut rng, dim, 0.5);
        let ep = ep_decompose(&h).unwrap();
        let m = ep.m();
        let r = rng.gen_range(1..=m + 2);
        let series = random::series_with_order(&mut rng, r, m.max(r));
        let report = apply_function_at_ep(&ep, &series).unwrap();

        let q = evaluate_at_ep(&ep, &series).unwrap().add_scalar(&-series.constant_term().clone());
        assert_eq!(report.depth_effective_after, index_of(&q));
        assert!(report.depth_effective_after <= report.depth_bound_after);
        assert_eq!(report.depth_bound_after, (m + 1).div_ceil(r));

        let flat = series.coeffs()[1..=m].iter().all(Zero::is_zero);
        assert_eq!(report.annihilated, flat);
        assert_eq!(report.annihilated, r > m);
        assert_eq!(annihilation_check(&ep, &series).unwrap(), flat);
        if flat {
            annihilated += 1;
        } else {
            kept += 1;
        }
    }
    assert!(annihilated > 30 && kept > 30);
}

#[test]
fn trace_of_hypergeometric_functions_at_eps() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe5);
    for _ in 0..120 {
        let dim = rng.gen_range(1..=6);
        let (_, _, h) = random_ep(&mut rng, dim, 0.0);
        let ep = ep_decompose(&h).unwrap();
        let (upper, lower) = random::hypergeom_params(&mut rng);

        // expanded around lambda: F(lambda) = 1
        let local = TruncSeries::hypergeom(&upper, &lower, ep.m()).unwrap();
        assert_eq!(evaluate_at_ep(&ep, &local).unwrap().trace(), G::from(dim as i64));

        // a terminating series centered at 0 is a polynomial in z, so it can
        // be recentered exactly at lambda
        let k = rng.gen_range(0..=4);
        let mut upper = upper;
        upper.push(G::from(-(k as i64)));
        let poly = TruncSeries::hypergeom(&upper, &lower, k).unwrap();
        let f_lambda = poly
            .coeffs()
            .iter()
            .rev()
            .fold(G::zero(), |acc, c| acc * ep.lambda.clone() + c.clone());
        let recentered = TruncSeries::recenter_poly(poly.coeffs(), &ep.lambda, ep.m().max(k));
        let value = evaluate_at_ep(&ep, &recentered).unwrap();
        assert_eq!(value.trace(), f_lambda * G::from(dim as i64));
        assert_eq!(value, poly_at(poly.coeffs(), &h));
    }
}

#[test]
fn resolvent_inverts_z_minus_h() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe6);
    for _ in 0..120 {
        let dim = rng.gen_range(1..=6);
        let (_, _, h) = random_ep(&mut rng, dim, 0.3);
        let ep = ep_decompose(&h).unwrap();
        let expansion = resolvent_expansion(&ep);
        assert_eq!(expansion.pole_order, ep.order);
        let mut points = Vec::new();
        while points.len() < 3 {
            let z = random::gaussian(&mut rng);
            if z != ep.lambda && !points.contains(&z) {
                points.push(z);
            }
        }
        for z in points {
            let z_minus_h = &Matrix::scalar(z.clone(), dim) - &h;
            assert_eq!(&z_minus_h * &expansion.evaluate(&z), Matrix::identity(dim));
        }
    }
}

#[test]
fn evolution_keeps_full_depth() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe7);
    for _ in 0..120 {
        let dim = rng.gen_range(1..=6);
        let (_, _, h) = random_ep(&mut rng, dim, 0.5);
        let ep = ep_decompose(&h).unwrap();
        let t = random::nonzero_gaussian(&mut rng);
        let at = evolution_at(&ep, &t);
        assert_eq!(at.scalar_prefactor_exponent, ep.lambda.clone() * t.clone());
        let expected = if ep.order == 1 { 0 } else { ep.order };
        assert_eq!(index_of(&at.polynomial_part.add_scalar(&-G::one())), expected);
        assert!(evolution_at(&ep, &G::zero()).polynomial_part == Matrix::identity(dim));

        // the polynomial part is exp(tN): check U(t) U(-t) = I and the
        // derivative relation M_j N = (j+1) M_{j+1}
        let back = evolution_at(&ep, &-t.clone()).polynomial_part;
        assert_eq!(&at.polynomial_part * &back, Matrix::identity(dim));
        let poly = time_evolution(&ep);
        for j in 0..poly.matrix_coeffs.len() - 1 {
            assert_eq!(
                &poly.matrix_coeffs[j] * &ep.nilpotent,
                poly.matrix_coeffs[j + 1].scale(&G::from(j as i64 + 1))
            );
        }
    }
}

#[test]
fn modified_resolvent_pole_orders() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe8);
    for _ in 0..250 {
        let dim = rng.gen_range(1..=6);
        let (_, _, h) = random_ep(&mut rng, dim, 0.5);
        let ep = ep_decompose(&h).unwrap();
        let m = ep.m();
        let r = rng.gen_range(1..=m + 2);
        let mut series = random::series_with_order(&mut rng, r, m.max(r));
        if rng.gen_bool(0.4) {
            series = series.nonconstant_part();
        }
        let f_lambda_zero = series.constant_term().is_zero();
        let res = modified_resolvent(&ep, &series).unwrap();

        if r <= m {
            assert!(res.traced_pole_order <= m + 1 - r);
        }
        // every F(H) N^j with j >= 1 is nilpotent, hence traceless
        assert!(res.traced.coeffs[1..].iter().all(Zero::is_zero));
        assert_eq!(res.traced.coeffs[0], series.constant_term().clone() * G::from(dim as i64));
        assert!(res.matrix_pole_order <= m + 1);
        if f_lambda_zero {
            assert!(res.matrix_pole_order <= (m + 1).saturating_sub(r));
        }

        // the traced expansion is the trace of the matrix one at any z
        let z = ep.lambda.clone() + G::from(2);
        assert_eq!(res.traced.evaluate(&z), res.matrix_valued.evaluate(&z).trace());
    }
}

#[test]
fn pure_powers_attain_the_matrix_pole_bound_on_full_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe9);
    for _ in 0..60 {
        let dim = rng.gen_range(2..=6);
        let (_, _, h) = random_ep(&mut rng, dim, 1.0);
        let ep = ep_decompose(&h).unwrap();
        assert_eq!(ep.order, dim);
        let m = ep.m();
        for r in 1..=m {
            let series: ExactSeries = TruncSeries::monomial(G::one(), r, m);
            let res = modified_resolvent(&ep, &series).unwrap();
            assert_eq!(res.matrix_pole_order, m + 1 - r);
            assert_eq!(res.traced_pole_order, 0);
        }
    }
}

#[test]
fn pt_symmetric_pair() {
    let (zero, one, two) = (G::zero(), G::one(), G::from(2));
    let ep = ep_decompose(&pt_symmetric_2x2(zero.clone(), one.clone(), one.clone())).unwrap();
    assert_eq!((ep.lambda.clone(), ep.order), (zero.clone(), 2));
    let t: G = "3/2-i".parse().unwrap();
    let want = &Matrix::identity(2) + &ep.nilpotent.scale(&t);
    assert_eq!(evolution_at(&ep, &t).polynomial_part, want);

    assert!(matches!(
        ep_decompose(&pt_symmetric_2x2(zero, one.clone(), two)),
        Err(Error::NotExceptionalPoint { .. })
    ));
    let scalar = ep_decompose(&pt_symmetric_2x2(G::from(5), G::zero(), G::zero())).unwrap();
    assert_eq!((scalar.lambda, scalar.order), (G::from(5), 1));
}

#[test]
fn contact_order_is_reported_from_the_full_series() {
    let ep = ep_decompose(&Matrix::jordan_block(3, G::from(2))).unwrap();
    let cubic = TruncSeries::monomial(G::one(), 3, 3);
    let report = apply_function_at_ep(&ep, &cubic).unwrap();
    assert_eq!(report.contact_order, Order::Finite(3));
    assert!(report.annihilated);
    let constant = TruncSeries::constant(G::from(7), 2);
    assert_eq!(apply_function_at_ep(&ep, &constant).unwrap().contact_order, Order::Infinite);
}
