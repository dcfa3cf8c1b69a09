use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::RngCore;

use super::{AutField, FieldError, SigmaOrder};
use crate::linalg::Rationals;

/// Dense polynomial over `Q` in the variable `t`, ascending and trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly(Vec<BigRational>);

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_poly(self))
    }
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly(coeffs)
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::new(vec![c])
    }

    pub fn one() -> Self {
        QPoly(vec![BigRational::one()])
    }

    pub fn t() -> Self {
        QPoly(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> Option<&BigRational> {
        self.0.last()
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        let zero = BigRational::zero();
        QPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&zero) + o.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::default();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let lead = d.lead().expect("division by zero polynomial");
        let dd = d.0.len();
        let mut r = self.0.clone();
        if r.len() < dd {
            return (QPoly::default(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd + 1];
        while r.len() >= dd {
            let shift = r.len() - dd;
            let c = r.last().unwrap() / lead;
            for (k, dk) in d.0.iter().enumerate() {
                r[shift + k] -= &c * dk;
            }
            q[shift] = c;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn monic(&self) -> QPoly {
        match self.lead() {
            None => self.clone(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    /// Monic gcd; zero only when both inputs are zero.
    ///
    /// Runs a primitive remainder sequence over `Z`, which avoids the
    /// coefficient blow-up of Euclid over `Q`.
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        if self.degree() == Some(0) || o.degree() == Some(0) {
            return QPoly::one();
        }
        let (mut a, mut b) = (primitive_part(self), primitive_part(o));
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while b.len() > 1 {
            let r = pseudo_rem(&a, &b);
            a = b;
            if r.is_empty() {
                return QPoly::new(a.into_iter().map(BigRational::from_integer).collect()).monic();
            }
            b = content_free(r);
        }
        // A nonzero constant remainder: coprime.
        QPoly::one()
    }

    fn exact_div(&self, d: &QPoly) -> QPoly {
        if d.is_one() {
            return self.clone();
        }
        self.div_rem(d).0
    }

    /// `p(t + c)`.
    pub fn shift(&self, c: &BigRational) -> QPoly {
        let lin = QPoly::new(vec![c.clone(), BigRational::one()]);
        let mut acc = QPoly::default();
        for a in self.0.iter().rev() {
            acc = acc.mul(&lin).add(&QPoly::constant(a.clone()));
        }
        acc
    }

    /// `p(c·t)`.
    pub fn dilate(&self, c: &BigRational) -> QPoly {
        let mut pow = BigRational::one();
        let mut out = Vec::with_capacity(self.0.len());
        for a in &self.0 {
            out.push(a * &pow);
            pow *= c;
        }
        QPoly::new(out)
    }
}

/// Integer polynomial proportional to `p` with content 1.
fn primitive_part(p: &QPoly) -> Vec<BigInt> {
    let l = p.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    content_free(p.0.iter().map(|c| c.numer() * (&l / c.denom())).collect())
}

fn content_free(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in &mut v {
            *c /= &g;
        }
    }
    v
}

/// Remainder of `lc(b)^k · a` by `b` over `Z`, trailing zeros trimmed.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let lb = b.last().expect("nonzero divisor");
    let mut r = a.to_vec();
    while r.len() >= b.len() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] -= &lr * bk;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
        r = content_free(r);
    }
    r
}

/// A rational function `num/den` in lowest terms with monic `den`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_ratfunc(self))
    }
}

impl RatFunc {
    pub fn from_poly(num: QPoly) -> Self {
        RatFunc { num, den: QPoly::one() }
    }

    /// Reduces `num/den` to lowest terms; `den` must be nonzero.
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc::from_poly(QPoly::default());
        }
        let (num, den) = if den.degree() == Some(0) {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            }
        };
        let lead = den.lead().unwrap().recip();
        RatFunc {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }

    /// `num/den` already coprime; only normalizes the denominator.
    fn from_reduced(num: QPoly, den: QPoly) -> Self {
        let lead = den.lead().expect("zero denominator").recip();
        if lead.is_one() {
            return RatFunc { num, den };
        }
        RatFunc { num: num.scale(&lead), den: den.scale(&lead) }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn is_poly(&self) -> bool {
        self.den.is_one()
    }
}

/// Automorphism of `Q(t)` fixing `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwistKind {
    /// t ↦ t + 1
    Shift,
    /// t ↦ q·t
    Scale(BigRational),
}

/// The rational function field `Q(t)` with σ a shift or a scaling of `t`.
#[derive(Clone, Debug)]
pub struct RationalFunctionField {
    twist: TwistKind,
    scalars: Rationals,
}

impl RationalFunctionField {
    pub fn shift() -> Self {
        RationalFunctionField { twist: TwistKind::Shift, scalars: Rationals }
    }

    /// σ(t) = q·t. `q = 1` is the identity and `q = 0` is not an automorphism;
    /// `q = -1` gives an automorphism of order two.
    pub fn scale(q: BigRational) -> Result<Self, FieldError> {
        if q.is_zero() {
            return Err(FieldError::InvalidField("scale factor must be nonzero".into()));
        }
        if q.is_one() {
            return Err(FieldError::IdentityAutomorphism);
        }
        Ok(RationalFunctionField { twist: TwistKind::Scale(q), scalars: Rationals })
    }

    pub fn twist(&self) -> &TwistKind {
        &self.twist
    }

    pub fn t(&self) -> RatFunc {
        RatFunc::from_poly(QPoly::t())
    }

    pub fn rational(&self, c: BigRational) -> RatFunc {
        RatFunc::from_poly(QPoly::constant(c))
    }

    pub fn poly(&self, coeffs: &[i64]) -> RatFunc {
        RatFunc::from_poly(QPoly::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect()))
    }

    fn twist_poly(&self, p: &QPoly, i: i64) -> QPoly {
        match &self.twist {
            TwistKind::Shift => p.shift(&BigRational::from_integer(i.into())),
            TwistKind::Scale(q) => {
                let qi = if i >= 0 {
                    num_traits::pow(q.clone(), i as usize)
                } else {
                    num_traits::pow(q.recip(), i.unsigned_abs() as usize)
                };
                p.dilate(&qi)
            }
        }
    }
}

impl AutField for RationalFunctionField {
    type Elem = RatFunc;
    type Scalars = Rationals;

    fn zero(&self) -> RatFunc {
        RatFunc::from_poly(QPoly::default())
    }

    fn one(&self) -> RatFunc {
        RatFunc::from_poly(QPoly::one())
    }

    fn from_int(&self, n: &BigInt) -> RatFunc {
        self.rational(BigRational::from_integer(n.clone()))
    }

    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if a.den == b.den {
            if a.is_poly() {
                return RatFunc::from_poly(a.num.add(&b.num));
            }
            return RatFunc::new(a.num.add(&b.num), a.den.clone());
        }
        // With g = gcd(den_a, den_b), only factors of g can cancel.
        let g = a.den.gcd(&b.den);
        let (ra, rb) = (a.den.exact_div(&g), b.den.exact_div(&g));
        let num = a.num.mul(&rb).add(&b.num.mul(&ra));
        if num.is_zero() {
            return self.zero();
        }
        let h = num.gcd(&g);
        RatFunc::from_reduced(num.exact_div(&h), ra.mul(&b.den.exact_div(&h)))
    }

    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &RatFunc) -> RatFunc {
        RatFunc { num: a.num.neg(), den: a.den.clone() }
    }

    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        if a.is_poly() && b.is_poly() {
            return RatFunc::from_poly(a.num.mul(&b.num));
        }
        // Cancel crosswise; both inputs are already in lowest terms.
        let g1 = a.num.gcd(&b.den);
        let g2 = b.num.gcd(&a.den);
        let num = a.num.exact_div(&g1).mul(&b.num.exact_div(&g2));
        let den = a.den.exact_div(&g2).mul(&b.den.exact_div(&g1));
        RatFunc::from_reduced(num, den)
    }

    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        if a.is_zero() {
            None
        } else {
            Some(RatFunc::new(a.den.clone(), a.num.clone()))
        }
    }

    fn sigma_pow(&self, a: &RatFunc, i: i64) -> RatFunc {
        if i == 0 || a.num.degree().unwrap_or(0) == 0 && a.is_poly() {
            return a.clone();
        }
        let num = self.twist_poly(&a.num, i);
        if a.is_poly() {
            return RatFunc::from_poly(num);
        }
        // A twist of coprime polynomials stays coprime; only the leading
        // coefficient of the denominator needs fixing.
        let den = self.twist_poly(&a.den, i);
        let lead = den.lead().unwrap().recip();
        RatFunc { num: num.scale(&lead), den: den.scale(&lead) }
    }

    fn sigma_order(&self) -> SigmaOrder {
        match &self.twist {
            TwistKind::Scale(q) if *q == -BigRational::one() => SigmaOrder::Finite(2),
            _ => SigmaOrder::Infinite,
        }
    }

    fn generator(&self) -> RatFunc {
        self.t()
    }

    fn generator_symbol(&self) -> &'static str {
        "t"
    }

    fn designated_witness(&self) -> Option<RatFunc> {
        // σ^j(t) is t + j or q^j·t, never t for j ≠ 0 unless q = -1.
        match self.sigma_order() {
            SigmaOrder::Infinite => Some(self.t()),
            SigmaOrder::Finite(_) => None,
        }
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn random_elem(&self, rng: &mut dyn RngCore) -> RatFunc {
        let small = |rng: &mut dyn RngCore| (rng.next_u32() % 7) as i64 - 3;
        let deg = (rng.next_u32() % 3) as usize;
        let num = QPoly::new((0..=deg).map(|_| BigRational::from_integer(small(rng).into())).collect());
        // Occasionally a linear denominator t + c, sometimes a rational constant.
        match rng.next_u32() % 8 {
            0 => {
                let c = BigRational::from_integer(small(rng).into());
                RatFunc::new(num, QPoly::new(vec![c, BigRational::one()]))
            }
            1 => {
                let d = BigInt::from(rng.next_u32() % 4 + 2);
                RatFunc::from_poly(num.scale(&BigRational::new(BigInt::one(), d)))
            }
            _ => RatFunc::from_poly(num),
        }
    }

    fn format_elem(&self, a: &RatFunc) -> String {
        format_ratfunc(a)
    }

    fn field_spec(&self) -> String {
        "qt".to_string()
    }

    fn sigma_spec(&self) -> String {
        match &self.twist {
            TwistKind::Shift => "shift".to_string(),
            TwistKind::Scale(q) => format!("scale:{}/{}", q.numer(), q.denom()),
        }
    }

    fn scalars(&self) -> &Rationals {
        &self.scalars
    }

    fn prime_coords(&self, _a: &RatFunc) -> Option<Vec<BigRational>> {
        None
    }

    fn k0_prime_basis(&self) -> Option<&[RatFunc]> {
        None
    }

    fn from_scalar(&self, s: &BigRational) -> RatFunc {
        self.rational(s.clone())
    }
}

fn format_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn format_poly(p: &QPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, c) in p.0.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let body = match k {
            0 => format_rational(&mag),
            _ => {
                let mono = if k == 1 { "t".to_string() } else { format!("t^{k}") };
                if mag.is_one() {
                    mono
                } else {
                    format!("{}*{mono}", format_rational(&mag))
                }
            }
        };
        match (out.is_empty(), c.is_negative()) {
            (true, true) => out.push_str(&format!("-{body}")),
            (true, false) => out.push_str(&body),
            (false, true) => out.push_str(&format!(" - {body}")),
            (false, false) => out.push_str(&format!(" + {body}")),
        }
    }
    out
}

fn format_ratfunc(a: &RatFunc) -> String {
    if a.den.is_one() {
        format_poly(&a.num)
    } else {
        let wrap = |s: String, extra: &[u8]| {
            if s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'^' || extra.contains(&b)) {
                s
            } else {
                format!("({s})")
            }
        };
        format!("{}/{}", wrap(format_poly(&a.num), b"*-"), wrap(format_poly(&a.den), b""))
    }
}
