#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use skewcomm::cli::{parse_field, AnyField};
use skewcomm::field::{AutField, GaloisField, RationalFunctionField};
use skewcomm::series::{SkewRing, SkewSeries};

/// Dense random series from `x^val` with `len` coefficients, leading one nonzero.
pub fn random_series<F: AutField>(d: &SkewRing<F>, rng: &mut ChaCha8Rng, val: i64, len: usize) -> SkewSeries<F::Elem> {
    let k = d.field();
    let mut coeffs = vec![k.random_nonzero(rng)];
    coeffs.extend((1..len).map(|_| k.random_elem(rng)));
    d.from_parts(val, coeffs, val + len as i64)
}

/// Random series with valuation in `[-8, 8]` and `len` coefficients.
pub fn random_any<F: AutField>(d: &SkewRing<F>, rng: &mut ChaCha8Rng, len: usize) -> SkewSeries<F::Elem> {
    let val = rng.gen_range(-8..=8);
    random_series(d, rng, val, len)
}

pub fn gf(spec: &str, sigma: &str) -> GaloisField {
    match parse_field(spec, sigma).unwrap() {
        AnyField::Gf(k) => k,
        AnyField::Qt(_) => unreachable!(),
    }
}

pub fn qt_shift() -> RationalFunctionField {
    RationalFunctionField::shift()
}

/// The finite-field configurations used throughout the suites.
pub fn finite_configs() -> Vec<(&'static str, GaloisField)> {
    vec![
        ("gf(2^5)/frob", gf("gf(2^5)", "frob")),
        ("gf(3^5)/frob", gf("gf(3^5)", "frob")),
        ("gf(2^8)/frob", gf("gf(2^8)", "frob")),
        ("gf(3^4)/frob", gf("gf(3^4)", "frob")),
    ]
}

/// `min(f.prec + g.val, g.prec + f.val)`, with `val = prec` for zero.
pub fn expected_mul_prec<E>(f: &SkewSeries<E>, g: &SkewSeries<E>) -> i64 {
    let fv = f.valuation().unwrap_or(f.prec());
    let gv = g.valuation().unwrap_or(g.prec());
    (f.prec() + gv).min(g.prec() + fv)
}
