use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::field::{GaloisField, RationalFunctionField};

fn f81() -> GaloisField {
    GaloisField::new(3, 4, 1).unwrap()
}

fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

fn random_series<F: AutField>(d: &SkewRing<F>, rng: &mut ChaCha8Rng, val: i64, len: usize) -> Series<F> {
    let k = d.field();
    let mut coeffs = vec![k.random_nonzero(rng)];
    coeffs.extend((1..len).map(|_| k.random_elem(rng)));
    d.from_parts(val, coeffs, val + len as i64)
}

fn product<F: AutField>(d: &SkewRing<F>, cert: &Certificate<F::Elem>) -> Series<F> {
    let [(p1, q1), (p2, q2)] = &cert.pairs;
    d.mul(&d.commutator(p1, q1), &d.commutator(p2, q2))
}

#[test]
fn monomial_bracket_over_shift() {
    let k = RationalFunctionField::shift();
    let d = SkewRing::new(k.clone());
    let c = bracket_monomial(&d, &k.t(), &k.one(), 1, 4).unwrap();
    assert_eq!(c, d.monomial(k.from_i64(-1), 1, 4));
    let t = d.constant(k.t(), 4);
    assert!(d.eq_to_prec(&d.commutator(&t, &c), &d.monomial(k.one(), 1, 4), 4).unwrap());
    assert!(bracket_monomial(&d, &k.t(), &k.zero(), 3, 5).unwrap().is_zero());
    assert_eq!(
        bracket_monomial(&d, &k.t(), &k.one(), 0, 5),
        Err(DecomposeError::WitnessFixed { exponent: 0 })
    );
}

#[test]
fn infinite_witness_on_x_inverse() {
    let k = RationalFunctionField::shift();
    let dec = Decomposer::new(k.clone()).unwrap();
    let d = dec.ring();
    let f = d.monomial(k.one(), -1, 8);
    let cert = dec.decompose(&f).unwrap();
    assert_eq!(cert.method, Method::InfiniteWitness);
    let [(p1, q1), (p2, q2)] = &cert.pairs;
    for p in [p1, p2] {
        assert_eq!(p.leading_coeff(), Some(&k.t()));
        assert_eq!(p.valuation(), Some(0));
        assert!(p.coeffs()[1..].iter().all(|c| k.is_zero(c)));
    }
    // x⁻¹ = x⁻²·x: σ⁻²(t) = t − 2 gives the ½, σ(t) = t + 1 gives the −1.
    assert_eq!(q1.valuation(), Some(-2));
    assert_eq!(q1.leading_coeff(), Some(&k.rational(half())));
    assert_eq!(q2.valuation(), Some(1));
    assert_eq!(q2.leading_coeff(), Some(&k.from_i64(-1)));
    assert!(q2.coeffs()[1..].iter().all(|c| k.is_zero(c)));
    assert!(verify_certificate(d, &cert).unwrap());
}

#[test]
fn infinite_witness_index_arithmetic() {
    let k = RationalFunctionField::shift();
    let dec = Decomposer::new(k.clone()).unwrap();
    let d = dec.ring();
    let one = d.one(10);
    let cert = dec.decompose(&one).unwrap();
    assert_eq!(cert.pairs[0].1.valuation(), Some(-1));
    assert_eq!(cert.pairs[1].1.valuation(), Some(1));
    let f = d.monomial(k.t(), 3, 12);
    let cert = dec.decompose(&f).unwrap();
    assert_eq!(cert.pairs[0].1.valuation(), Some(-4));
    assert_eq!(cert.pairs[1].1.valuation(), Some(7));
}

#[test]
fn split_exponent_rule() {
    assert_eq!(split_exponent(7, 4).unwrap(), SplitPair { u: 6, v: 1, n: 4, s: 7 });
    assert_eq!(split_exponent(0, 5).unwrap(), SplitPair { u: 1, v: -1, n: 5, s: 0 });
    assert_eq!(split_exponent(2, 4), Err(DecomposeError::NoSplit { s: 2, n: 4 }));
    assert_eq!(split_exponent(1, 3), Err(DecomposeError::SplitUnsupported(3)));
    for n in 4..=12u64 {
        for s in -50..=50i64 {
            if n == 4 && s.rem_euclid(4) == 2 {
                continue;
            }
            assert!(split_exponent(s, n).unwrap().is_valid(), "s={s} n={n}");
        }
    }
}

#[test]
fn factor_in_dn_single_term() {
    let k = GaloisField::new(2, 5, 1).unwrap();
    let d = SkewRing::new(k.clone());
    let a = k.generator();
    let f = d.monomial(a.clone(), 3, 9);
    let split = SplitPair { u: 2, v: 1, n: 5, s: 3 };
    let (g, h) = factor_in_dn(&d, &f, split).unwrap();
    assert_eq!(g, d.monomial(a, 2, 8));
    assert_eq!(h, d.monomial(k.one(), 1, 7));
}

#[test]
fn factor_in_dn_avoids_multiples_of_n() {
    let k = GaloisField::new(3, 5, 1).unwrap();
    let d = SkewRing::new(k.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..40 {
        let s = rand::Rng::gen_range(&mut rng, -8..=8);
        let f = random_series(&d, &mut rng, s, 15);
        let (g, h) = factor_in_dn(&d, &f, split_exponent(s, 5).unwrap()).unwrap();
        for series in [&g, &h] {
            assert!(series.terms().all(|(e, c)| e % 5 != 0 || k.is_zero(c)));
        }
        assert!(d.eq_to_prec(&d.mul(&g, &h), &f, f.prec()).unwrap());
    }
}

#[test]
fn bracket_with_b_inverts_on_dn() {
    let k = GaloisField::new(2, 5, 1).unwrap();
    let d = SkewRing::new(k.clone());
    let b = find_witness(&k, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let coeffs: Vec<_> = (1..=6)
        .map(|e| if e == 5 { k.zero() } else { k.random_nonzero(&mut rng) })
        .collect();
    let g = d.from_parts(1, coeffs, 7);
    let w = bracket_with_b(&d, &b, &g).unwrap();
    assert_eq!(w.prec(), g.prec());
    let bc = d.constant(b.clone(), w.relative_prec());
    assert!(d.eq_to_prec(&d.commutator(&bc, &w), &g, g.prec()).unwrap());
    assert!(bracket_with_b(&d, &b, &d.zero(6)).unwrap().is_zero());
    let bad = d.monomial(k.one(), 10, 11);
    assert_eq!(bracket_with_b(&d, &b, &bad), Err(DecomposeError::WitnessFixed { exponent: 10 }));
}

#[test]
fn bracket_with_x_inverts_on_l() {
    let k = f81();
    let d = SkewRing::new(k.clone());
    let ctx = Order4Ctx::new(&k).unwrap();
    let z = k.generator();
    let g = d.monomial(k.sub(&k.sigma(&z), &z), 3, 6);
    let w = bracket_with_x(&d, &ctx, &g).unwrap();
    assert_eq!(w.valuation(), Some(2));
    let x = d.monomial(k.one(), 1, 1 + w.relative_prec());
    assert!(d.eq_to_prec(&d.commutator(&x, &w), &g, g.prec()).unwrap());
    let bad = d.monomial(ctx.y.clone(), 4, 5);
    assert_eq!(bracket_with_x(&d, &ctx, &bad), Err(DecomposeError::NotInL { exponent: 4 }));
}

#[test]
fn factor_in_l_is_exhaustively_correct_over_f81() {
    let k = f81();
    let ctx = Order4Ctx::new(&k).unwrap();
    let mut checked = 0;
    for c in k.elements() {
        let expected_k1 = !k.is_zero(&c) && k.sigma_pow(&c, 2) == c && ctx.in_k1(&k, &c);
        match factor_in_l(&k, &ctx, &c) {
            Ok((a, b)) => {
                assert!(l_factorization_holds(&k, &ctx, &c, &a, &b).unwrap());
                checked += 1;
            }
            Err(DecomposeError::ZeroInput) => assert!(k.is_zero(&c)),
            Err(DecomposeError::K1Input) => assert!(expected_k1),
            Err(e) => panic!("{e}"),
        }
    }
    // k₁ ∩ {σ² c = c} is k₁ itself: 2 nonzero elements over F₃.
    assert_eq!(checked, 80 - 2);
    assert_eq!(factor_in_l(&k, &ctx, &ctx.e1), Err(DecomposeError::K1Input));
}

#[test]
fn factor_over_l_keeps_coefficients_in_l() {
    let k = f81();
    let d = SkewRing::new(k.clone());
    let ctx = Order4Ctx::new(&k).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    while done < 100 {
        let s = 4 * rand::Rng::gen_range(&mut rng, -2..=2) + 2;
        let f = random_series(&d, &mut rng, s, 10);
        if ctx.in_k1(&k, f.leading_coeff().unwrap()) {
            continue;
        }
        let (f1, f2) = factor_over_l(&d, &ctx, &f).unwrap();
        assert_eq!(f1.start(), s);
        assert_eq!(f2.start(), 0);
        for c in f1.coeffs().iter().chain(f2.coeffs()) {
            assert!(ctx.in_l(&k, c).unwrap());
        }
        assert!(d.eq_to_prec(&d.mul(&f1, &f2), &f, f.prec()).unwrap());
        done += 1;
    }
    let bad = d.monomial(ctx.e1.clone(), 2, 6);
    assert_eq!(factor_over_l(&d, &ctx, &bad), Err(DecomposeError::K1Leading));
}

#[test]
fn order4_branches() {
    let k = f81();
    let dec = Decomposer::new(k.clone()).unwrap();
    let d = dec.ring();
    let e1 = dec.order4_ctx().unwrap().e1.clone();
    let cases = [
        (d.monomial(k.one(), 5, 12), Method::Order4Split),
        (d.monomial(k.generator(), 2, 12), Method::Order4L),
        (d.monomial(e1, 2, 12), Method::Order4Conjugated),
    ];
    for (f, method) in cases {
        let cert = dec.decompose(&f).unwrap();
        assert_eq!(cert.method, method);
        assert!(!cert.experimental);
        assert!(verify_certificate(d, &cert).unwrap());
    }
    let split = dec.decompose(&d.monomial(k.one(), 5, 12)).unwrap();
    assert_eq!(split.pairs[0].1.valuation(), Some(6));
    assert_eq!(split.pairs[1].1.valuation(), Some(-1));
}

#[test]
fn characteristic_two_order_four_is_flagged() {
    let k = GaloisField::new(2, 4, 1).unwrap();
    let dec = Decomposer::new(k.clone()).unwrap();
    let d = dec.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for s in -3..=6 {
        let f = random_series(d, &mut rng, s, 8);
        let cert = dec.decompose(&f).unwrap();
        assert!(cert.experimental);
    }
}

#[test]
fn zero_input_certificate() {
    let k = GaloisField::new(2, 5, 1).unwrap();
    let dec = Decomposer::new(k).unwrap();
    let d = dec.ring();
    let cert = dec.decompose(&d.zero(6)).unwrap();
    assert_eq!(cert.method, Method::ZeroInput);
    let p = product(d, &cert);
    assert!(p.is_zero());
    assert!(p.prec() >= 6);
}

#[test]
fn scope_errors() {
    let f9 = GaloisField::new(3, 2, 1).unwrap();
    let dec = Decomposer::new(f9).unwrap();
    let one = dec.ring().one(4);
    assert_eq!(dec.decompose(&one), Err(DecomposeError::UnsupportedOrder(2)));
    let f27 = GaloisField::new(3, 3, 1).unwrap();
    let dec = Decomposer::new(f27).unwrap();
    let zero = dec.ring().zero(4);
    assert_eq!(dec.decompose(&zero), Err(DecomposeError::UnsupportedOrder(3)));
    let flip = RationalFunctionField::scale(BigRational::from_integer((-1).into())).unwrap();
    let dec = Decomposer::new(flip).unwrap();
    let one = dec.ring().one(4);
    assert_eq!(dec.decompose(&one), Err(DecomposeError::UnsupportedOrder(2)));
}

#[test]
fn tampering_is_detected() {
    let k = GaloisField::new(3, 5, 1).unwrap();
    let dec = Decomposer::new(k.clone()).unwrap();
    let d = dec.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = random_series(d, &mut rng, -2, 10);
    let cert = dec.decompose(&f).unwrap();

    let mut tampered = cert.clone();
    let q = &tampered.pairs[1].1;
    let mut coeffs = q.coeffs().to_vec();
    coeffs[0] = k.add(&coeffs[0], &k.one());
    tampered.pairs[1].1 = d.from_parts(q.start(), coeffs, q.prec());
    assert!(!verify_certificate(d, &tampered).unwrap());

    let mut wrong_input = cert.clone();
    wrong_input.input = d.add(&f, &d.monomial(k.one(), 5, f.prec()));
    assert!(!verify_certificate(d, &wrong_input).unwrap());

    let other = SkewRing::new(GaloisField::new(3, 5, 2).unwrap());
    let mut foreign = cert.clone();
    foreign.sigma = other.field().sigma_spec();
    assert!(matches!(verify_certificate(d, &foreign), Err(DecomposeError::FieldMismatch { .. })));
}

#[test]
fn certificate_json_round_trip() {
    let k = RationalFunctionField::shift();
    let dec = Decomposer::new(k.clone()).unwrap();
    let d = dec.ring();
    let f = d.from_terms(&[(-1, k.one()), (2, k.t())], 8).unwrap();
    let cert = dec.decompose(&f).unwrap();
    let json = cert.to_json(&k);
    let keys: Vec<usize> = ["\"field\"", "\"sigma\"", "\"method\"", "\"prec\"", "\"input\"", "\"pairs\""]
        .iter()
        .map(|key| json.find(key).unwrap())
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    assert!(!json.contains("experimental"));
    let back = Certificate::from_json(d, &json).unwrap();
    assert_eq!(back, cert);
    assert!(verify_certificate(d, &back).unwrap());
}

#[test]
fn conjugation_commutes_with_brackets() {
    let k = f81();
    let d = SkewRing::new(k.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let f = random_series(&d, &mut rng, -1, 8);
        let g = random_series(&d, &mut rng, 2, 8);
        let u = d.constant(k.random_nonzero(&mut rng), 20);
        let lhs = d.conjugate(&d.commutator(&f, &g), &u).unwrap();
        let rhs = d.commutator(&d.conjugate(&f, &u).unwrap(), &d.conjugate(&g, &u).unwrap());
        let p = lhs.prec().min(rhs.prec());
        assert!(d.eq_to_prec(&lhs, &rhs, p).unwrap());
    }
}
