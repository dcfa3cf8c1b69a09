//! Truncated skew Laurent series in `D = k((σ;x))`.
//!
//! A [`SkewSeries`] is known modulo `O(x^prec)`. Multiplication follows the
//! rule `x^i · a = σ^i(a) · x^i`, so the coefficient of `x^m` in `fg` is
//! `Σ_{i+j=m} f_i · σ^i(g_j)`.

use std::cmp::min;

use thiserror::Error;

use crate::field::{AutField, SigmaOrder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("exponent {exponent} is not below the precision {prec}")]
    ExponentBeyondPrecision { exponent: i64, prec: i64 },
    #[error("series is zero to precision and cannot be inverted")]
    ZeroNotInvertible,
    #[error("comparison up to x^{upto} exceeds the available precision {available}")]
    PrecisionExceeded { upto: i64, available: i64 },
}

/// Element of `k((σ;x))` modulo `O(x^prec)`.
///
/// Normal form: either `coeffs` is empty (zero to precision, `val == prec`)
/// or `coeffs[0] ≠ 0` and `coeffs[i]` is the coefficient of `x^{val+i}` for
/// every exponent below `prec`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewSeries<E> {
    val: i64,
    coeffs: Vec<E>,
    prec: i64,
}

impl<E> SkewSeries<E> {
    /// Valuation, or `None` for a series that is zero to precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.val)
    }

    /// First stored exponent; equals `prec` for a zero series.
    pub fn start(&self) -> i64 {
        self.val
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Number of known coefficients from the valuation on.
    pub fn relative_prec(&self) -> i64 {
        self.prec - self.val
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> Option<&E> {
        self.coeffs.first()
    }

    /// `(exponent, coefficient)` pairs for every stored coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &E)> {
        let v = self.val;
        self.coeffs.iter().enumerate().map(move |(i, c)| (v + i as i64, c))
    }
}

/// The ring `D = k((σ;x))` over a field `k`; all series operations go through it.
#[derive(Clone, Debug)]
pub struct SkewRing<F: AutField> {
    field: F,
}

impl<F: AutField> SkewRing<F> {
    pub fn new(field: F) -> Self {
        SkewRing { field }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Builds a normal-form series from raw parts; `coeffs[i]` sits at `start + i`.
    pub fn from_parts(&self, start: i64, coeffs: Vec<F::Elem>, prec: i64) -> SkewSeries<F::Elem> {
        assert_eq!(start + coeffs.len() as i64, prec, "coefficient window must end at prec");
        let lead = coeffs.iter().position(|c| !self.field.is_zero(c));
        match lead {
            None => self.zero(prec),
            Some(k) => {
                let mut coeffs = coeffs;
                coeffs.drain(..k);
                SkewSeries { val: start + k as i64, coeffs, prec }
            }
        }
    }

    pub fn zero(&self, prec: i64) -> SkewSeries<F::Elem> {
        SkewSeries { val: prec, coeffs: Vec::new(), prec }
    }

    pub fn one(&self, prec: i64) -> SkewSeries<F::Elem> {
        self.monomial(self.field.one(), 0, prec)
    }

    /// `a · x^e + O(x^prec)`; requires `e < prec`.
    pub fn monomial(&self, a: F::Elem, e: i64, prec: i64) -> SkewSeries<F::Elem> {
        assert!(e < prec, "monomial exponent {e} not below precision {prec}");
        let mut coeffs = vec![self.field.zero(); (prec - e) as usize];
        coeffs[0] = a;
        self.from_parts(e, coeffs, prec)
    }

    /// A field element as a series known to `O(x^prec)`.
    pub fn constant(&self, a: F::Elem, prec: i64) -> SkewSeries<F::Elem> {
        self.monomial(a, 0, prec)
    }

    /// `Σ a_e x^e + O(x^prec)`; repeated exponents are summed.
    pub fn from_terms(
        &self,
        terms: &[(i64, F::Elem)],
        prec: i64,
    ) -> Result<SkewSeries<F::Elem>, SeriesError> {
        if let Some(&(exponent, _)) = terms.iter().find(|(e, _)| *e >= prec) {
            return Err(SeriesError::ExponentBeyondPrecision { exponent, prec });
        }
        let Some(start) = terms.iter().map(|(e, _)| *e).min() else {
            return Ok(self.zero(prec));
        };
        let mut coeffs = vec![self.field.zero(); (prec - start) as usize];
        for (e, a) in terms {
            let slot = &mut coeffs[(e - start) as usize];
            *slot = self.field.add(slot, a);
        }
        Ok(self.from_parts(start, coeffs, prec))
    }

    /// Coefficient of `x^e`; zero below the valuation.
    ///
    /// Panics if `e ≥ prec`, where the coefficient is unknown.
    pub fn coeff(&self, f: &SkewSeries<F::Elem>, e: i64) -> F::Elem {
        assert!(e < f.prec, "coefficient of x^{e} unknown beyond O(x^{})", f.prec);
        if e < f.val {
            self.field.zero()
        } else {
            f.coeffs[(e - f.val) as usize].clone()
        }
    }

    /// Drops information at and above `prec`; no-op if already coarser.
    pub fn truncate(&self, f: &SkewSeries<F::Elem>, prec: i64) -> SkewSeries<F::Elem> {
        if prec >= f.prec {
            return f.clone();
        }
        if prec <= f.val {
            return self.zero(prec);
        }
        let coeffs = f.coeffs[..(prec - f.val) as usize].to_vec();
        SkewSeries { val: f.val, coeffs, prec }
    }

    pub fn add(&self, f: &SkewSeries<F::Elem>, g: &SkewSeries<F::Elem>) -> SkewSeries<F::Elem> {
        self.combine(f, g, |a, b| self.field.add(a, b))
    }

    pub fn sub(&self, f: &SkewSeries<F::Elem>, g: &SkewSeries<F::Elem>) -> SkewSeries<F::Elem> {
        self.combine(f, g, |a, b| self.field.sub(a, b))
    }

    pub fn neg(&self, f: &SkewSeries<F::Elem>) -> SkewSeries<F::Elem> {
        SkewSeries {
            val: f.val,
            coeffs: f.coeffs.iter().map(|c| self.field.neg(c)).collect(),
            prec: f.prec,
        }
    }

    fn combine(
        &self,
        f: &SkewSeries<F::Elem>,
        g: &SkewSeries<F::Elem>,
        op: impl Fn(&F::Elem, &F::Elem) -> F::Elem,
    ) -> SkewSeries<F::Elem> {
        let prec = min(f.prec, g.prec);
        let start = min(f.val, g.val).min(prec);
        let zero = self.field.zero();
        let at = |s: &'_ SkewSeries<F::Elem>, e: i64| -> F::Elem {
            if e < s.val {
                zero.clone()
            } else {
                s.coeffs[(e - s.val) as usize].clone()
            }
        };
        let coeffs = (start..prec).map(|e| op(&at(f, e), &at(g, e))).collect();
        self.from_parts(start, coeffs, prec)
    }

    /// Left multiplication by a field element: `a · f`.
    pub fn scale_left(&self, a: &F::Elem, f: &SkewSeries<F::Elem>) -> SkewSeries<F::Elem> {
        let coeffs = f.coeffs.iter().map(|c| self.field.mul(a, c)).collect();
        self.from_parts(f.val, coeffs, f.prec)
    }

    /// Twisted product. Precision: `min(f.prec + g.val, g.prec + f.val)`,
    /// with the valuation of a zero series taken to be its precision.
    pub fn mul(&self, f: &SkewSeries<F::Elem>, g: &SkewSeries<F::Elem>) -> SkewSeries<F::Elem> {
        let prec = min(f.prec + g.val, g.prec + f.val);
        if f.is_zero() || g.is_zero() {
            return self.zero(prec);
        }
        let start = f.val + g.val;
        let len = (prec - start) as usize;
        let mut out = vec![self.field.zero(); len];
        let mut twisted = TwistCache::new(&self.field, g);
        for (a, fa) in f.coeffs.iter().enumerate().take(len) {
            if self.field.is_zero(fa) {
                continue;
            }
            let i = f.val + a as i64;
            let gs = twisted.get(i, len - a);
            for (b, gb) in gs.iter().enumerate() {
                if self.field.is_zero(gb) {
                    continue;
                }
                let t = self.field.mul(fa, gb);
                out[a + b] = self.field.add(&out[a + b], &t);
            }
        }
        self.from_parts(start, out, prec)
    }

    /// Inverse of a series that is nonzero to precision.
    ///
    /// For `f = a_s x^s + …` known to relative precision `N`, the result has
    /// valuation `-s`, leading coefficient `σ^{-s}(a_s^{-1})` and precision
    /// `N - s`; its coefficients solve `f · f⁻¹ = 1` term by term.
    pub fn inverse(&self, f: &SkewSeries<F::Elem>) -> Result<SkewSeries<F::Elem>, SeriesError> {
        let s = f.valuation().ok_or(SeriesError::ZeroNotInvertible)?;
        let n = f.relative_prec() as usize;
        let k = &self.field;
        let lead_inv = k.inv(&f.coeffs[0]).expect("normal form leading coefficient is nonzero");
        let neg_lead_inv = k.neg(&lead_inv);
        let mut g: Vec<F::Elem> = Vec::with_capacity(n);
        g.push(k.sigma_pow(&lead_inv, -s));
        for t in 1..n {
            // Σ_{r=1}^{t} f_{s+r} σ^{s+r}(g_{t-r})
            let mut acc = k.zero();
            for r in 1..=t {
                let fr = &f.coeffs[r];
                if k.is_zero(fr) || k.is_zero(&g[t - r]) {
                    continue;
                }
                let tw = k.sigma_pow(&g[t - r], s + r as i64);
                acc = k.add(&acc, &k.mul(fr, &tw));
            }
            g.push(k.sigma_pow(&k.mul(&neg_lead_inv, &acc), -s));
        }
        Ok(self.from_parts(-s, g, n as i64 - s))
    }

    /// `[f, g] = fg − gf`.
    pub fn commutator(&self, f: &SkewSeries<F::Elem>, g: &SkewSeries<F::Elem>) -> SkewSeries<F::Elem> {
        self.sub(&self.mul(f, g), &self.mul(g, f))
    }

    /// `u · f · u⁻¹`.
    pub fn conjugate(
        &self,
        f: &SkewSeries<F::Elem>,
        u: &SkewSeries<F::Elem>,
    ) -> Result<SkewSeries<F::Elem>, SeriesError> {
        let ui = self.inverse(u)?;
        Ok(self.mul(&self.mul(u, f), &ui))
    }

    /// Whether `f` and `g` agree on every exponent below `upto`.
    pub fn eq_to_prec(
        &self,
        f: &SkewSeries<F::Elem>,
        g: &SkewSeries<F::Elem>,
        upto: i64,
    ) -> Result<bool, SeriesError> {
        let available = min(f.prec, g.prec);
        if upto > available {
            return Err(SeriesError::PrecisionExceeded { upto, available });
        }
        let lo = min(f.val, g.val);
        Ok((lo..upto).all(|e| self.coeff(f, e) == self.coeff(g, e)))
    }

    /// Applies σ^i to every coefficient.
    pub fn twist(&self, f: &SkewSeries<F::Elem>, i: i64) -> SkewSeries<F::Elem> {
        SkewSeries {
            val: f.val,
            coeffs: f.coeffs.iter().map(|c| self.field.sigma_pow(c, i)).collect(),
            prec: f.prec,
        }
    }

    /// `x^e · f`: shifts exponents by `e` and twists coefficients by σ^e.
    pub fn shift_left(&self, e: i64, f: &SkewSeries<F::Elem>) -> SkewSeries<F::Elem> {
        let t = self.twist(f, e);
        SkewSeries { val: t.val + e, coeffs: t.coeffs, prec: t.prec + e }
    }
}

/// σ^i applied to a whole coefficient vector, cached by residue when σ has
/// finite order.
struct TwistCache<'a, F: AutField> {
    field: &'a F,
    base: &'a [F::Elem],
    order: Option<u64>,
    cache: Vec<Option<Vec<F::Elem>>>,
    scratch: Vec<F::Elem>,
}

impl<'a, F: AutField> TwistCache<'a, F> {
    fn new(field: &'a F, g: &'a SkewSeries<F::Elem>) -> Self {
        let order = match field.sigma_order() {
            SigmaOrder::Finite(n) => Some(n),
            SigmaOrder::Infinite => None,
        };
        TwistCache {
            field,
            base: &g.coeffs,
            order,
            cache: vec![None; order.unwrap_or(0) as usize],
            scratch: Vec::new(),
        }
    }

    /// The first `len` coefficients of g, each twisted by σ^i.
    fn get(&mut self, i: i64, len: usize) -> &[F::Elem] {
        let len = len.min(self.base.len());
        match self.order {
            Some(n) => {
                let r = i.rem_euclid(n as i64) as usize;
                let field = self.field;
                let base = self.base;
                let slot = self.cache[r].get_or_insert_with(|| {
                    base.iter().map(|c| field.sigma_pow(c, r as i64)).collect()
                });
                &slot[..len]
            }
            None => {
                self.scratch.clear();
                self.scratch
                    .extend(self.base[..len].iter().map(|c| self.field.sigma_pow(c, i)));
                &self.scratch
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{GaloisField, RationalFunctionField};
    use num_rational::BigRational;

    #[test]
    fn from_terms_layout() {
        let k = GaloisField::new(3, 4, 1).unwrap();
        let d = SkewRing::new(k.clone());
        let z = d.from_terms(&[], 5).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.prec(), 5);
        let g = k.generator();
        let f = d.from_terms(&[(-3, k.from_i64(2)), (0, g.clone())], 4).unwrap();
        assert_eq!(f.valuation(), Some(-3));
        assert_eq!(f.prec(), 4);
        let mut expect = vec![k.zero(); 7];
        expect[0] = k.from_i64(2);
        expect[3] = g.clone();
        assert_eq!(f.coeffs(), &expect[..]);
        assert_eq!(
            d.from_terms(&[(6, g)], 5),
            Err(SeriesError::ExponentBeyondPrecision { exponent: 6, prec: 5 })
        );
    }

    #[test]
    fn defining_relation_over_qt() {
        let k = RationalFunctionField::shift();
        let d = SkewRing::new(k.clone());
        let x = d.monomial(k.one(), 1, 10);
        let t = d.constant(k.t(), 10);
        // x·t − t·x = x
        assert!(d.eq_to_prec(&d.commutator(&x, &t), &x, 10).unwrap());
        let xt = d.mul(&x, &t);
        assert_eq!(d.coeff(&xt, 1), k.poly(&[1, 1]));
    }

    #[test]
    fn monomial_products() {
        let k = GaloisField::new(2, 5, 1).unwrap();
        let d = SkewRing::new(k.clone());
        let a = k.elem(&[1, 1, 0, 1]);
        let b = k.elem(&[0, 1, 1]);
        let p = d.mul(&d.monomial(a.clone(), 1, 20), &d.monomial(b.clone(), 1, 20));
        assert_eq!(p.valuation(), Some(2));
        assert_eq!(d.coeff(&p, 2), k.mul(&a, &k.sigma(&b)));
    }

    #[test]
    fn addition_and_precision() {
        let k = GaloisField::new(3, 4, 1).unwrap();
        let d = SkewRing::new(k.clone());
        let f = d.from_terms(&[(-1, k.one()), (1, k.one())], 8).unwrap();
        let g = d.from_terms(&[(1, k.from_i64(-1))], 6).unwrap();
        let h = d.add(&f, &g);
        assert_eq!(h.prec(), 6);
        assert_eq!(h, d.monomial(k.one(), -1, 6));
        let z = d.add(&f, &d.neg(&f));
        assert!(z.is_zero());
        assert_eq!(z.prec(), 8);
    }

    #[test]
    fn inverse_examples() {
        let k = RationalFunctionField::shift();
        let d = SkewRing::new(k.clone());
        let x = d.monomial(k.one(), 1, 10);
        let xi = d.inverse(&x).unwrap();
        assert_eq!(xi, d.monomial(k.one(), -1, 8));
        let one_minus_x = d.from_terms(&[(0, k.one()), (1, k.from_i64(-1))], 6).unwrap();
        let geo = d.inverse(&one_minus_x).unwrap();
        assert_eq!(geo.prec(), 6);
        assert!(geo.coeffs().iter().all(|c| *c == k.one()));
        let z = d.zero(4);
        assert_eq!(d.inverse(&z), Err(SeriesError::ZeroNotInvertible));
    }

    #[test]
    fn inverse_leading_coefficient() {
        let k = RationalFunctionField::scale(BigRational::new(2.into(), 1.into())).unwrap();
        let d = SkewRing::new(k.clone());
        let a = k.poly(&[1, 1]);
        let f = d.from_terms(&[(3, a.clone()), (4, k.t())], 12).unwrap();
        let g = d.inverse(&f).unwrap();
        assert_eq!(g.valuation(), Some(-3));
        assert_eq!(g.prec(), 12 - 6);
        assert_eq!(d.coeff(&g, -3), k.sigma_pow(&k.inv(&a).unwrap(), -3));
        let one = d.one(100);
        let fg = d.mul(&f, &g);
        let gf = d.mul(&g, &f);
        assert!(d.eq_to_prec(&fg, &one, fg.prec()).unwrap());
        assert!(d.eq_to_prec(&gf, &one, gf.prec()).unwrap());
    }

    #[test]
    fn eq_to_prec_bounds() {
        let k = GaloisField::new(3, 4, 1).unwrap();
        let d = SkewRing::new(k.clone());
        let x = d.monomial(k.one(), 1, 9);
        let x9 = d.from_terms(&[(1, k.one()), (9, k.one())], 10).unwrap();
        assert!(d.eq_to_prec(&x, &x, 9).unwrap());
        assert!(d.eq_to_prec(&x, &x9, 9).unwrap());
        assert!(matches!(d.eq_to_prec(&x, &x9, 10), Err(SeriesError::PrecisionExceeded { .. })));
        let two_x = d.monomial(k.from_i64(2), 1, 9);
        assert!(!d.eq_to_prec(&x, &two_x, 2).unwrap());
    }

    #[test]
    fn commutator_with_x_is_sigma_minus_one() {
        let k = GaloisField::new(3, 4, 1).unwrap();
        let d = SkewRing::new(k.clone());
        let a = k.elem(&[2, 1, 0, 1]);
        let x = d.monomial(k.one(), 1, 12);
        let c = d.commutator(&x, &d.constant(a.clone(), 12));
        let expect = d.monomial(k.sub(&k.sigma(&a), &a), 1, 12);
        assert!(d.eq_to_prec(&c, &expect, 12).unwrap());
        let f = d.from_terms(&[(0, a), (2, k.one())], 7).unwrap();
        assert!(d.commutator(&f, &f).is_zero());
    }

    #[test]
    fn conjugation_by_field_element() {
        // y · a x^s · y⁻¹ = y a σ^s(y⁻¹) x^s
        let k = GaloisField::new(3, 4, 1).unwrap();
        let d = SkewRing::new(k.clone());
        let y = k.elem(&[1, 2, 0, 1]);
        let a = k.elem(&[0, 1, 1]);
        let f = d.monomial(a.clone(), 2, 10);
        let c = d.conjugate(&f, &d.constant(y.clone(), 10)).unwrap();
        let expect = k.mul(&k.mul(&y, &a), &k.sigma_pow(&k.inv(&y).unwrap(), 2));
        assert_eq!(c.valuation(), Some(2));
        assert_eq!(d.coeff(&c, 2), expect);
        assert_eq!(d.conjugate(&f, &d.one(10)).unwrap(), f);
    }

    #[test]
    fn shift_left_matches_product() {
        let k = RationalFunctionField::shift();
        let d = SkewRing::new(k.clone());
        let f = d.from_terms(&[(1, k.t()), (3, k.poly(&[2, 0, 1]))], 6).unwrap();
        let x_m2 = d.monomial(k.one(), -2, 40);
        assert_eq!(d.shift_left(-2, &f), d.mul(&x_m2, &f));
    }
}
