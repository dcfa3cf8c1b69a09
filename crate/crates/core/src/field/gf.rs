use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::RngCore;

use super::{AutField, FieldError, SigmaOrder};
use crate::linalg::{nullspace, PrimeField, ScalarField};

/// Element of `F_{p^m}`: coordinates in the power basis `1, g, …, g^{m-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GfElem(Vec<u64>);

impl GfElem {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Debug for GfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf{:?}", self.0)
    }
}

/// `F_{p^m} = F_p[g]/(μ(g))` with σ = Frobenius^e.
///
/// σ^i is applied through precomputed F_p-linear matrices, one per residue
/// of `i` modulo the order of σ.
#[derive(Clone)]
pub struct GaloisField {
    inner: Arc<GfInner>,
}

struct GfInner {
    fp: PrimeField,
    m: usize,
    /// Monic defining polynomial, ascending coefficients, length `m + 1`.
    modulus: Vec<u64>,
    custom_modulus: bool,
    frob_power: u64,
    order: u64,
    /// `sigma_mats[i][j]` = coordinates of σ^i(g^j).
    sigma_mats: Vec<Vec<Vec<u64>>>,
    k0_basis: Vec<GfElem>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GaloisField({} σ={})", self.field_spec(), self.sigma_spec())
    }
}

impl GaloisField {
    /// `F_{p^m}` with the default defining polynomial and σ = Frobenius^e.
    pub fn new(p: u64, m: usize, frob_power: u64) -> Result<Self, FieldError> {
        let modulus = default_modulus(p, m)?;
        Self::build(p, m, modulus, false, frob_power)
    }

    /// `F_{p^m}` with a caller-supplied defining polynomial (ascending
    /// coefficients `c0..=cm`, monic, irreducible).
    pub fn with_modulus(p: u64, modulus: Vec<u64>, frob_power: u64) -> Result<Self, FieldError> {
        if modulus.len() < 2 {
            return Err(FieldError::InvalidField("defining polynomial must have degree ≥ 1".into()));
        }
        let m = modulus.len() - 1;
        let custom = default_modulus(p, m).map_or(true, |d| d != modulus);
        Self::build(p, m, modulus, custom, frob_power)
    }

    fn build(
        p: u64,
        m: usize,
        modulus: Vec<u64>,
        custom_modulus: bool,
        frob_power: u64,
    ) -> Result<Self, FieldError> {
        if !is_prime(p) || p >= (1 << 31) {
            return Err(FieldError::InvalidField(format!("{p} is not a supported prime")));
        }
        if m == 0 {
            return Err(FieldError::InvalidField("extension degree must be ≥ 1".into()));
        }
        let fp = PrimeField::new(p);
        if modulus.iter().any(|&c| c >= p) || modulus[m] != 1 {
            return Err(FieldError::InvalidField(
                "defining polynomial must be monic with coefficients in 0..p".into(),
            ));
        }
        if !is_irreducible(&fp, &modulus) {
            return Err(FieldError::InvalidField("defining polynomial is reducible".into()));
        }
        let e = frob_power % m as u64;
        if e == 0 {
            return Err(FieldError::IdentityAutomorphism);
        }
        let order = m as u64 / e.gcd(&(m as u64));

        // σ(g) = g^{p^e}; σ(g^j) = σ(g)^j.
        let mut proto = GfInner {
            fp,
            m,
            modulus,
            custom_modulus,
            frob_power: e,
            order,
            sigma_mats: Vec::new(),
            k0_basis: Vec::new(),
        };
        let gen = unit_vec(m, 1);
        let exp = BigInt::from(p).pow(e as u32);
        let sigma_g = proto.pow(&gen, &exp);
        let mut images = Vec::with_capacity(m);
        let mut cur = unit_vec(m, 0);
        for _ in 0..m {
            images.push(cur.0.clone());
            cur = proto.mul(&cur, &sigma_g);
        }
        let identity: Vec<Vec<u64>> = (0..m).map(|j| unit_vec(m, j).0).collect();
        let mut mats = vec![identity];
        for i in 1..order as usize {
            let prev = &mats[i - 1];
            let next: Vec<Vec<u64>> = prev.iter().map(|col| apply_matrix(&fp, &images, col)).collect();
            mats.push(next);
        }
        proto.sigma_mats = mats;

        // k₀ = ker(σ − 1) over F_p.
        let cols: Vec<Vec<u64>> = (0..m)
            .map(|j| {
                let mut c = images[j].clone();
                c[j] = fp.sub(&c[j], &1);
                c
            })
            .collect();
        proto.k0_basis = nullspace(&fp, &cols).into_iter().map(GfElem).collect();
        Ok(GaloisField { inner: Arc::new(proto) })
    }

    pub fn p(&self) -> u64 {
        self.inner.fp.modulus()
    }

    pub fn degree(&self) -> usize {
        self.inner.m
    }

    pub fn frob_power(&self) -> u64 {
        self.inner.frob_power
    }

    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn elem(&self, coords: &[i64]) -> GfElem {
        let m = self.inner.m;
        assert!(coords.len() <= m, "too many coordinates");
        let mut v = vec![0; m];
        for (slot, &c) in v.iter_mut().zip(coords) {
            *slot = self.inner.fp.reduce_i64(c);
        }
        GfElem(v)
    }

    /// All `p^m` elements, in coordinate-lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = GfElem> + '_ {
        let p = self.p();
        let m = self.inner.m;
        let total = p.pow(m as u32);
        (0..total).map(move |mut idx| {
            let mut v = vec![0; m];
            for slot in v.iter_mut() {
                *slot = idx % p;
                idx /= p;
            }
            GfElem(v)
        })
    }

    /// `a^k` for a nonnegative exponent.
    pub fn pow(&self, a: &GfElem, k: &BigInt) -> GfElem {
        self.inner.pow(a, k)
    }
}

impl GfInner {
    fn mul(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let fp = &self.fp;
        let m = self.m;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % fp.modulus();
            }
        }
        for d in (m..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for k in 0..m {
                let t = fp.mul(&c, &self.modulus[k]);
                prod[d - m + k] = fp.sub(&prod[d - m + k], &t);
            }
        }
        prod.truncate(m);
        GfElem(prod)
    }

    fn pow(&self, a: &GfElem, k: &BigInt) -> GfElem {
        let mut acc = unit_vec(self.m, 0);
        let bits = k.to_str_radix(2);
        for bit in bits.chars() {
            acc = self.mul(&acc, &acc);
            if bit == '1' {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
}

fn unit_vec(m: usize, j: usize) -> GfElem {
    let mut v = vec![0; m];
    v[j] = 1;
    GfElem(v)
}

fn apply_matrix(fp: &PrimeField, cols: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
    let mut out = vec![0; cols.len()];
    for (col, &xj) in cols.iter().zip(x) {
        if xj == 0 {
            continue;
        }
        for (o, &c) in out.iter_mut().zip(col) {
            *o = (*o + c * xj) % fp.modulus();
        }
    }
    out
}

impl AutField for GaloisField {
    type Elem = GfElem;
    type Scalars = PrimeField;

    fn zero(&self) -> GfElem {
        GfElem(vec![0; self.inner.m])
    }

    fn one(&self) -> GfElem {
        unit_vec(self.inner.m, 0)
    }

    fn from_int(&self, n: &BigInt) -> GfElem {
        let p = BigInt::from(self.p());
        let r = n.mod_floor(&p).to_u64().expect("residue fits");
        let mut v = vec![0; self.inner.m];
        v[0] = r;
        GfElem(v)
    }

    fn is_zero(&self, a: &GfElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let fp = &self.inner.fp;
        GfElem(a.0.iter().zip(&b.0).map(|(x, y)| fp.add(x, y)).collect())
    }

    fn sub(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let fp = &self.inner.fp;
        GfElem(a.0.iter().zip(&b.0).map(|(x, y)| fp.sub(x, y)).collect())
    }

    fn neg(&self, a: &GfElem) -> GfElem {
        let fp = &self.inner.fp;
        GfElem(a.0.iter().map(|x| fp.neg(x)).collect())
    }

    fn mul(&self, a: &GfElem, b: &GfElem) -> GfElem {
        self.inner.mul(a, b)
    }

    fn inv(&self, a: &GfElem) -> Option<GfElem> {
        if self.is_zero(a) {
            return None;
        }
        let fp = &self.inner.fp;
        let (g, s) = poly_ext_gcd(fp, &trim(a.0.clone()), &self.inner.modulus);
        debug_assert_eq!(g, vec![1]);
        let mut v = s;
        v.resize(self.inner.m, 0);
        Some(GfElem(v))
    }

    fn sigma_pow(&self, a: &GfElem, i: i64) -> GfElem {
        let r = i.rem_euclid(self.inner.order as i64) as usize;
        if r == 0 {
            return a.clone();
        }
        GfElem(apply_matrix(&self.inner.fp, &self.inner.sigma_mats[r], &a.0))
    }

    fn sigma_order(&self) -> SigmaOrder {
        SigmaOrder::Finite(self.inner.order)
    }

    fn generator(&self) -> GfElem {
        unit_vec(self.inner.m, 1)
    }

    fn generator_symbol(&self) -> &'static str {
        "g"
    }

    fn designated_witness(&self) -> Option<GfElem> {
        None
    }

    fn characteristic(&self) -> u64 {
        self.p()
    }

    fn random_elem(&self, rng: &mut dyn RngCore) -> GfElem {
        let p = self.p();
        GfElem((0..self.inner.m).map(|_| rng.next_u64() % p).collect())
    }

    fn format_elem(&self, a: &GfElem) -> String {
        let mut terms = Vec::new();
        for (k, &c) in a.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            };
            terms.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (_, false) => format!("{c}*{mono}"),
            });
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    fn field_spec(&self) -> String {
        let base = format!("gf({}^{})", self.p(), self.inner.m);
        if self.inner.custom_modulus {
            let cs: Vec<String> = self.inner.modulus.iter().map(u64::to_string).collect();
            format!("{base};poly={}", cs.join(","))
        } else {
            base
        }
    }

    fn sigma_spec(&self) -> String {
        format!("frob^{}", self.inner.frob_power)
    }

    fn scalars(&self) -> &PrimeField {
        &self.inner.fp
    }

    fn prime_coords(&self, a: &GfElem) -> Option<Vec<u64>> {
        Some(a.0.clone())
    }

    fn k0_prime_basis(&self) -> Option<&[GfElem]> {
        Some(&self.inner.k0_basis)
    }

    fn from_scalar(&self, s: &u64) -> GfElem {
        let mut v = vec![0; self.inner.m];
        v[0] = s % self.p();
        GfElem(v)
    }
}

/// Default defining polynomial for `F_{p^m}`: a Conway polynomial when
/// tabulated, otherwise the lexicographically least monic irreducible.
pub fn default_modulus(p: u64, m: usize) -> Result<Vec<u64>, FieldError> {
    if !is_prime(p) || p >= (1 << 31) {
        return Err(FieldError::InvalidField(format!("{p} is not a supported prime")));
    }
    if m == 0 {
        return Err(FieldError::InvalidField("extension degree must be ≥ 1".into()));
    }
    let table: &[(u64, usize, &[u64])] = &[
        (2, 2, &[1, 1, 1]),
        (2, 3, &[1, 1, 0, 1]),
        (2, 4, &[1, 1, 0, 0, 1]),
        (2, 5, &[1, 0, 1, 0, 0, 1]),
        (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
        (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
        (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
        (3, 2, &[2, 2, 1]),
        (3, 3, &[1, 2, 0, 1]),
        (3, 4, &[2, 0, 0, 2, 1]),
        (3, 5, &[1, 2, 0, 0, 0, 1]),
        (3, 6, &[2, 2, 1, 0, 2, 0, 1]),
        (5, 2, &[2, 4, 1]),
        (5, 3, &[3, 3, 0, 1]),
        (5, 4, &[2, 4, 4, 0, 1]),
        (5, 5, &[3, 4, 0, 0, 0, 1]),
        (7, 2, &[3, 6, 1]),
        (7, 3, &[4, 0, 6, 1]),
        (7, 4, &[3, 4, 5, 0, 1]),
    ];
    if let Some((_, _, poly)) = table.iter().find(|(q, d, _)| *q == p && *d == m) {
        return Ok(poly.to_vec());
    }
    let fp = PrimeField::new(p);
    let count = p.checked_pow(m as u32).ok_or_else(|| {
        FieldError::InvalidField(format!("gf({p}^{m}) is too large for a default polynomial search"))
    })?;
    for idx in 0..count {
        let mut poly = vec![0; m + 1];
        let mut rest = idx;
        for slot in poly.iter_mut().take(m) {
            *slot = rest % p;
            rest /= p;
        }
        poly[m] = 1;
        if is_irreducible(&fp, &poly) {
            return Ok(poly);
        }
    }
    Err(FieldError::InvalidField(format!("no irreducible polynomial of degree {m} over F_{p}")))
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

// Dense F_p[x] helpers. Polynomials are ascending and trimmed.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_sub(fp: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| fp.sub(a.get(i).unwrap_or(&0), b.get(i).unwrap_or(&0)))
            .collect(),
    )
}

fn poly_mul(fp: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = fp.add(&out[i + j], &fp.mul(x, y));
        }
    }
    trim(out)
}

fn poly_divrem(fp: &PrimeField, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = fp.inv(b.last().unwrap()).unwrap();
    let mut q = vec![0; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = fp.mul(r.last().unwrap(), &lead_inv);
        q[shift] = c;
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] = fp.sub(&r[shift + k], &fp.mul(&c, bk));
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn poly_gcd(fp: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = poly_divrem(fp, &a, &b);
        a = b;
        b = r;
    }
    make_monic(fp, a)
}

fn make_monic(fp: &PrimeField, a: Vec<u64>) -> Vec<u64> {
    match a.last() {
        None => a,
        Some(lead) => {
            let inv = fp.inv(lead).unwrap();
            a.iter().map(|c| fp.mul(c, &inv)).collect()
        }
    }
}

/// Returns `(gcd, s)` with `s·a ≡ gcd (mod m)`, gcd monic.
fn poly_ext_gcd(fp: &PrimeField, a: &[u64], m: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (trim(m.to_vec()), trim(a.to_vec()));
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(fp, &r0, &r1);
        let s2 = poly_sub(fp, &s0, &poly_mul(fp, &q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    let inv = fp.inv(r0.last().unwrap()).unwrap();
    let g = r0.iter().map(|c| fp.mul(c, &inv)).collect();
    let s = s0.iter().map(|c| fp.mul(c, &inv)).collect();
    (g, s)
}

fn poly_powmod(fp: &PrimeField, base: &[u64], mut exp: u64, m: &[u64]) -> Vec<u64> {
    let mut acc = vec![1];
    let mut b = poly_divrem(fp, base, m).1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_divrem(fp, &poly_mul(fp, &acc, &b), m).1;
        }
        b = poly_divrem(fp, &poly_mul(fp, &b, &b), m).1;
        exp >>= 1;
    }
    acc
}

/// Rabin's irreducibility test for a monic polynomial over F_p.
fn is_irreducible(fp: &PrimeField, f: &[u64]) -> bool {
    let f = trim(f.to_vec());
    let m = f.len().saturating_sub(1);
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let p = fp.modulus();
    let x = vec![0, 1];
    // frob[k] = x^{p^k} mod f
    let mut frob = vec![poly_divrem(fp, &x, &f).1];
    for _ in 0..m {
        let next = poly_powmod(fp, frob.last().unwrap(), p, &f);
        frob.push(next);
    }
    if poly_sub(fp, &frob[m], &poly_divrem(fp, &x, &f).1) != Vec::<u64>::new() {
        return false;
    }
    let mut primes = Vec::new();
    let mut rest = m;
    let mut d = 2;
    while rest > 1 {
        if rest.is_multiple_of(d) {
            primes.push(d);
            while rest.is_multiple_of(d) {
                rest /= d;
            }
        }
        d += 1;
    }
    primes.into_iter().all(|q| {
        let h = poly_sub(fp, &frob[m / q], &x);
        poly_gcd(fp, &h, &f) == vec![1]
    })
}
