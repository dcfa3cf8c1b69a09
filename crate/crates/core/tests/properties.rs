mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skewcomm::decompose::{verify_certificate, Certificate, Decomposer};
use skewcomm::field::{AutField, SigmaOrder};
use skewcomm::series::{SkewRing, SkewSeries};
use skewcomm::text::{format_series, parse_series};
use skewcomm::trace::reduced_trace;

use common::*;

/// Random series that may have interior zeros or be zero outright.
fn sparse_series<F: AutField>(d: &SkewRing<F>, seed: u64) -> SkewSeries<F::Elem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = d.field();
    let val = (seed % 17) as i64 - 8;
    let len = (seed / 17 % 10) as usize;
    let coeffs = (0..len)
        .map(|j| if (seed >> (j % 60)) & 1 == 0 { k.zero() } else { k.random_elem(&mut rng) })
        .collect();
    d.from_parts(val, coeffs, val + len as i64)
}

fn print_round_trip<F: AutField>(k: F, seed: u64) -> Result<(), TestCaseError> {
    let d = SkewRing::new(k.clone());
    let f = sparse_series(&d, seed);
    let text = format_series(&k, &f);
    let back = parse_series(&d, &text, 5).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
    prop_assert_eq!(&back, &f, "{}", text);
    prop_assert_eq!(format_series(&k, &back), text);
    Ok(())
}

fn json_round_trip<F: AutField>(k: F, seed: u64) -> Result<(), TestCaseError> {
    let dec = Decomposer::new(k.clone()).unwrap();
    let d = dec.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_any(d, &mut rng, 10);
    let cert = dec.decompose(&f).unwrap();
    let json = cert.to_json(&k);
    let back = Certificate::from_json(d, &json).unwrap();
    prop_assert_eq!(&back, &cert);
    prop_assert!(verify_certificate(d, &back).unwrap());
    prop_assert_eq!(back.to_json(&k), json);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn print_parse_round_trip_gf81(seed in any::<u64>()) {
        print_round_trip(gf("gf(3^4)", "frob"), seed)?;
    }

    #[test]
    fn print_parse_round_trip_gf32(seed in any::<u64>()) {
        print_round_trip(gf("gf(2^5)", "frob"), seed)?;
    }

    #[test]
    fn print_parse_round_trip_gf256(seed in any::<u64>()) {
        print_round_trip(gf("gf(2^8)", "frob^3"), seed)?;
    }

    #[test]
    fn print_parse_round_trip_qt(seed in any::<u64>()) {
        print_round_trip(qt_shift(), seed)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certificate_json_round_trip(seed in any::<u64>()) {
        json_round_trip(gf("gf(3^5)", "frob"), seed)?;
        json_round_trip(gf("gf(3^4)", "frob"), seed)?;
        json_round_trip(qt_shift(), seed)?;
    }

    #[test]
    fn reduced_trace_is_k0_linear(seed in any::<u64>()) {
        for (_, k) in finite_configs() {
            let d = SkewRing::new(k.clone());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_any(&d, &mut rng, 12);
            let g = random_any(&d, &mut rng, 12);
            // An element of k₀: its own trace image is fixed by σ.
            let c = skewcomm::field::field_trace(&k, &k.random_elem(&mut rng)).unwrap();
            prop_assert_eq!(k.sigma(&c), c.clone());
            let lhs = reduced_trace(&d, &d.add(&d.scale_left(&c, &f), &g)).unwrap();
            let tf = reduced_trace(&d, &f).unwrap();
            let tg = reduced_trace(&d, &g).unwrap();
            let rhs = d.add(&d.scale_left(&c, &tf), &tg);
            let p = lhs.prec().min(rhs.prec());
            prop_assert!(d.eq_to_prec(&lhs, &rhs, p).unwrap());
        }
    }

    #[test]
    fn certificate_commutators_are_traceless(seed in any::<u64>()) {
        for (_, k) in finite_configs() {
            let dec = Decomposer::new(k).unwrap();
            let d = dec.ring();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_any(d, &mut rng, 12);
            let cert = dec.decompose(&f).unwrap();
            for (p, q) in &cert.pairs {
                prop_assert!(reduced_trace(d, &d.commutator(p, q)).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn sigma_degree_divides_order(seed in any::<u64>()) {
        for (_, k) in finite_configs() {
            let SigmaOrder::Finite(n) = k.sigma_order() else { unreachable!() };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = k.random_elem(&mut rng);
            match skewcomm::field::sigma_degree(&k, &a, n) {
                skewcomm::field::SigmaDegree::Finite(m) => prop_assert_eq!(n % m, 0),
                other => prop_assert!(false, "{:?}", other),
            }
        }
    }
}
