//! Factorization of elements of `k((σ;x))` into two commutators.
//!
//! Every nonzero `f` is written as `[p₁,q₁]·[p₂,q₂]`, with a strategy chosen
//! by the order of σ:
//!
//! * infinite order: `f = x^n · T` with both factors in `[b, D]` for a
//!   witness `b` of infinite σ-degree;
//! * finite order `n ≥ 5`, and order 4 when `s ≢ 2 (mod 4)`: `f = g·h` with
//!   `g, h` supported off `nℤ`, hence both in `[b, D]`;
//! * order 4, `s ≡ 2 (mod 4)`: `f = f₁·f₂` with all coefficients in
//!   `L = Im(σ − 1)`, hence both in `[x, D]`, after conjugating by the normal
//!   basis element `y` when the leading coefficient lies in `k₁`.
//!
//! Orders 2 and 3 are rejected: the only known argument there is an
//! existence proof with no construction.

mod certificate;

use thiserror::Error;

pub use certificate::{Certificate, CertificateError, CertificateJson, Method, SeriesJson};

use crate::field::{find_witness, k0_relation, k0_solve, AutField, FieldError, Order4Ctx, SigmaOrder};
use crate::series::{SeriesError, SkewRing, SkewSeries};

type Series<F> = SkewSeries<<F as AutField>::Elem>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error(
        "σ has order {0}: only an existence argument (reduced-trace-zero commutators in cyclic \
         algebras of degree 2 or 3) is known, so no factorization can be constructed"
    )]
    UnsupportedOrder(u64),
    #[error("σ is the identity automorphism")]
    IdentityAutomorphism,
    #[error("witness is fixed by σ^{exponent}; cannot bracket the x^{exponent} term")]
    WitnessFixed { exponent: i64 },
    #[error("coefficient of x^{exponent} is not in L = Im(σ − 1)")]
    NotInL { exponent: i64 },
    #[error("element lies in k₁ = {{z : σ(z) = −z}}")]
    K1Input,
    #[error("leading coefficient lies in k₁ = {{z : σ(z) = −z}}")]
    K1Leading,
    #[error("zero has no factorization of this form")]
    ZeroInput,
    #[error("no exponent split of s = {s} for n = {n}")]
    NoSplit { s: i64, n: u64 },
    #[error("exponent splits need n ≥ 4, got {0}")]
    SplitUnsupported(u64),
    #[error("certificate is for {found}, expected {expected}")]
    FieldMismatch { expected: String, found: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("constructed factorization failed verification")]
    VerificationFailed,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Exponents `u + v = s` with `n ∤ u`, `n ∤ v` and `n ∤ (u − v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitPair {
    pub u: i64,
    pub v: i64,
    pub n: u64,
    pub s: i64,
}

impl SplitPair {
    pub fn is_valid(&self) -> bool {
        let n = self.n as i64;
        self.u + self.v == self.s && self.u % n != 0 && self.v % n != 0 && (self.u - self.v) % n != 0
    }
}

/// A constant series precise enough that multiplying it with `partner`
/// loses nothing.
fn constant_for<F: AutField>(d: &SkewRing<F>, a: F::Elem, partner: &Series<F>) -> Series<F> {
    d.constant(a, partner.relative_prec().max(1))
}

/// `c = (b − σ^i(b))⁻¹ · a · x^i`, so that `[b, c] = a · x^i`.
pub fn bracket_monomial<F: AutField>(
    d: &SkewRing<F>,
    b: &F::Elem,
    a: &F::Elem,
    i: i64,
    prec: i64,
) -> Result<Series<F>, DecomposeError> {
    let k = d.field();
    let diff = k.sub(b, &k.sigma_pow(b, i));
    let inv = k.inv(&diff).ok_or(DecomposeError::WitnessFixed { exponent: i })?;
    if i >= prec {
        return Err(SeriesError::ExponentBeyondPrecision { exponent: i, prec }.into());
    }
    Ok(d.monomial(k.mul(&inv, a), i, prec))
}

/// Termwise preimage of `w ↦ [b, w]`: `Σ (b − σ^i(b))⁻¹ g_i x^i`.
///
/// Every nonzero coefficient of `g` must sit at an exponent `i` with
/// `σ^i(b) ≠ b`.
pub fn bracket_with_b<F: AutField>(
    d: &SkewRing<F>,
    b: &F::Elem,
    g: &Series<F>,
) -> Result<Series<F>, DecomposeError> {
    let k = d.field();
    let mut out = Vec::with_capacity(g.coeffs().len());
    for (i, gi) in g.terms() {
        if k.is_zero(gi) {
            out.push(k.zero());
            continue;
        }
        let diff = k.sub(b, &k.sigma_pow(b, i));
        let inv = k.inv(&diff).ok_or(DecomposeError::WitnessFixed { exponent: i })?;
        out.push(k.mul(&inv, gi));
    }
    Ok(d.from_parts(g.start(), out, g.prec()))
}

/// Termwise preimage of `w ↦ [x, w]`: `Σ z_i x^{i-1}` with `σ(z_i) − z_i = g_i`.
pub fn bracket_with_x<F: AutField>(
    d: &SkewRing<F>,
    ctx: &Order4Ctx<F::Elem>,
    g: &Series<F>,
) -> Result<Series<F>, DecomposeError> {
    let k = d.field();
    let mut out = Vec::with_capacity(g.coeffs().len());
    for (i, gi) in g.terms() {
        let z = ctx.sigma_minus_one_preimage(k, gi).map_err(|e| match e {
            FieldError::NotInL => DecomposeError::NotInL { exponent: i },
            other => other.into(),
        })?;
        out.push(z);
    }
    Ok(d.from_parts(g.start() - 1, out, g.prec() - 1))
}

/// Deterministic split of `s` for modulus `n`: `(s − 1, 1)` when
/// `s mod n ∈ {n − 1, n − 2}`, else `(s + 1, −1)`.
pub fn split_exponent(s: i64, n: u64) -> Result<SplitPair, DecomposeError> {
    if n < 4 {
        return Err(DecomposeError::SplitUnsupported(n));
    }
    let r = s.rem_euclid(n as i64) as u64;
    if n == 4 && r == 2 {
        return Err(DecomposeError::NoSplit { s, n });
    }
    let (u, v) = if r == n - 1 || r == n - 2 { (s - 1, 1) } else { (s + 1, -1) };
    let split = SplitPair { u, v, n, s };
    debug_assert!(split.is_valid());
    Ok(split)
}

/// Writes `f = g · h` with `g` starting at `x^u`, `h` at `x^v`, and neither
/// having a nonzero coefficient at an exponent divisible by `n`.
///
/// Starts from `g_u = a_s`, `h_v = 1`; at step `t` exactly one of
/// `g_{u+t}`, `h_{v+t}` may be nonzero (the one whose exponent avoids `nℤ`)
/// and it is solved from the coefficient of `x^{s+t}`.
pub fn factor_in_dn<F: AutField>(
    d: &SkewRing<F>,
    f: &Series<F>,
    split: SplitPair,
) -> Result<(Series<F>, Series<F>), DecomposeError> {
    let k = d.field();
    let s = f.valuation().ok_or(DecomposeError::ZeroInput)?;
    if s != split.s || !split.is_valid() {
        return Err(DecomposeError::Precondition(format!(
            "split {split:?} does not match valuation {s}"
        )));
    }
    let (u, v, n) = (split.u, split.v, split.n as i64);
    let len = f.relative_prec() as usize;
    let a = f.coeffs();
    let mut gb: Vec<F::Elem> = vec![a[0].clone()];
    let mut hc: Vec<F::Elem> = vec![k.one()];
    let lead_inv = k.inv(&a[0]).expect("leading coefficient is nonzero");
    for t in 1..len {
        let mut rest = k.zero();
        for r in 1..t {
            if k.is_zero(&gb[r]) || k.is_zero(&hc[t - r]) {
                continue;
            }
            let tw = k.sigma_pow(&hc[t - r], u + r as i64);
            rest = k.add(&rest, &k.mul(&gb[r], &tw));
        }
        let residual = k.sub(&a[t], &rest);
        if (u + t as i64) % n != 0 {
            let scale = k.inv(&k.sigma_pow(&hc[0], u + t as i64)).expect("h_v is nonzero");
            gb.push(k.mul(&scale, &residual));
            hc.push(k.zero());
        } else {
            gb.push(k.zero());
            hc.push(k.sigma_pow(&k.mul(&lead_inv, &residual), -u));
        }
    }
    let g = d.from_parts(u, gb, u + len as i64);
    let h = d.from_parts(v, hc, v + len as i64);
    Ok((g, h))
}

/// Factors `c = a · b` with `a, b ∈ L` and `{a, σ^i(b)}` k₀-independent for
/// every `i`, so that `aL + σ^i(b)L = k`.
///
/// Requires `c ≠ 0`, and `c ∉ k₁` whenever `σ²(c) = c`.
pub fn factor_in_l<F: AutField>(
    field: &F,
    ctx: &Order4Ctx<F::Elem>,
    c: &F::Elem,
) -> Result<(F::Elem, F::Elem), DecomposeError> {
    if field.is_zero(c) {
        return Err(DecomposeError::ZeroInput);
    }
    let (a, b) = if field.sigma_pow(c, 2) != *c {
        // Some nonzero z ∈ k₂ has c·z ∈ L: dim k₂ + dim L exceeds dim k.
        let gens = [
            field.mul(c, &ctx.k2_basis[0]),
            field.mul(c, &ctx.k2_basis[1]),
            ctx.l_basis[0].clone(),
            ctx.l_basis[1].clone(),
            ctx.l_basis[2].clone(),
        ];
        let rel = k0_relation(field, &gens)?
            .ok_or_else(|| DecomposeError::Precondition("cL ∩ k₂ relation not found".into()))?;
        let z = field.add(&field.mul(&rel[0], &ctx.k2_basis[0]), &field.mul(&rel[1], &ctx.k2_basis[1]));
        let a = field
            .inv(&z)
            .ok_or_else(|| DecomposeError::Precondition("degenerate k₂ relation".into()))?;
        (a, field.mul(c, &z))
    } else {
        if ctx.in_k1(field, c) {
            return Err(DecomposeError::K1Input);
        }
        let e2 = &ctx.e2;
        let b0 = field.div(c, e2).expect("e₂ is nonzero");
        if ctx.independent(field, e2, &b0)? && ctx.independent(field, e2, &field.sigma(&b0))? {
            (e2.clone(), b0)
        } else {
            // Here c = β·e₂² with β ∈ k₀; switch to a = σ(e₂).
            let a = ctx.k2_basis[1].clone();
            let b = field.div(c, &a).expect("σ(e₂) is nonzero");
            (a, b)
        }
    };
    if !l_factorization_holds(field, ctx, c, &a, &b)? {
        return Err(DecomposeError::Precondition(format!(
            "no L-factorization with spanning shifts found for {}",
            field.format_elem(c)
        )));
    }
    Ok((a, b))
}

fn l_factorization_holds<F: AutField>(
    field: &F,
    ctx: &Order4Ctx<F::Elem>,
    c: &F::Elem,
    a: &F::Elem,
    b: &F::Elem,
) -> Result<bool, FieldError> {
    if field.mul(a, b) != *c || !ctx.in_l(field, a)? || !ctx.in_l(field, b)? {
        return Ok(false);
    }
    for i in 0..4 {
        if !ctx.independent(field, a, &field.sigma_pow(b, i))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Writes `f = f₁ · f₂` with `f₁` from `x^s`, `f₂` from `x^0`, and every
/// coefficient of both in `L`. Requires the leading coefficient `∉ k₁`.
///
/// Each step solves `b_s c′ + σ^{s+t}(c₀) b = residual` for `c′, b ∈ L`,
/// a system of 4 equations in 6 unknowns over k₀.
pub fn factor_over_l<F: AutField>(
    d: &SkewRing<F>,
    ctx: &Order4Ctx<F::Elem>,
    f: &Series<F>,
) -> Result<(Series<F>, Series<F>), DecomposeError> {
    let k = d.field();
    let s = f.valuation().ok_or(DecomposeError::ZeroInput)?;
    let a = f.coeffs();
    if ctx.in_k1(k, &a[0]) {
        return Err(DecomposeError::K1Leading);
    }
    let (bs, c0p) = factor_in_l(k, ctx, &a[0]).map_err(|e| match e {
        DecomposeError::K1Input => DecomposeError::K1Leading,
        other => other,
    })?;
    let len = f.relative_prec() as usize;
    let c0 = k.sigma_pow(&c0p, -s);
    let mut bv = vec![bs.clone()];
    let mut cv = vec![c0.clone()];
    let left: Vec<F::Elem> = ctx.l_basis.iter().map(|l| k.mul(&bs, l)).collect();
    for t in 1..len {
        let mut rest = k.zero();
        for r in 1..t {
            if k.is_zero(&bv[r]) || k.is_zero(&cv[t - r]) {
                continue;
            }
            let tw = k.sigma_pow(&cv[t - r], s + r as i64);
            rest = k.add(&rest, &k.mul(&bv[r], &tw));
        }
        let residual = k.sub(&a[t], &rest);
        let shifted = k.sigma_pow(&c0, s + t as i64);
        let gens: Vec<F::Elem> = left
            .iter()
            .cloned()
            .chain(ctx.l_basis.iter().map(|l| k.mul(&shifted, l)))
            .collect();
        let lambda = k0_solve(k, &gens, &residual)?.ok_or_else(|| {
            DecomposeError::Precondition(format!("aL + σ^{t}(b)L does not span k"))
        })?;
        let combo = |coeffs: &[F::Elem]| {
            coeffs
                .iter()
                .zip(&ctx.l_basis)
                .fold(k.zero(), |acc, (lam, l)| k.add(&acc, &k.mul(lam, l)))
        };
        let ct_prime = combo(&lambda[..3]);
        bv.push(combo(&lambda[3..]));
        cv.push(k.sigma_pow(&ct_prime, -s));
    }
    let f1 = d.from_parts(s, bv, s + len as i64);
    let f2 = d.from_parts(0, cv, len as i64);
    Ok((f1, f2))
}

fn certificate<F: AutField>(
    d: &SkewRing<F>,
    method: Method,
    input: &Series<F>,
    pairs: [(Series<F>, Series<F>); 2],
) -> Certificate<F::Elem> {
    let k = d.field();
    Certificate {
        field: k.field_spec(),
        sigma: k.sigma_spec(),
        method,
        check_prec: input.prec(),
        input: input.clone(),
        pairs,
        experimental: k.characteristic() == 2 && k.sigma_order() == SigmaOrder::Finite(4),
    }
}

fn bracket_pair<F: AutField>(
    d: &SkewRing<F>,
    b: &F::Elem,
    g: &Series<F>,
) -> Result<(Series<F>, Series<F>), DecomposeError> {
    let w = bracket_with_b(d, b, g)?;
    Ok((constant_for(d, b.clone(), &w), w))
}

/// Infinite σ-degree witness `b`: with `s = val f`, `n = −|s| − 1` and
/// `T = x^{−n} f` (valuation `s − n ≥ 1`), `f = [b, c·x^n] · [b, w]`.
pub fn decompose_infinite<F: AutField>(
    d: &SkewRing<F>,
    b: &F::Elem,
    f: &Series<F>,
) -> Result<Certificate<F::Elem>, DecomposeError> {
    let s = f.valuation().ok_or(DecomposeError::ZeroInput)?;
    let n = -s.abs() - 1;
    let tail = d.shift_left(-n, f);
    let head = bracket_monomial(d, b, &d.field().one(), n, n + f.relative_prec())?;
    let first = (constant_for(d, b.clone(), &head), head);
    let second = bracket_pair(d, b, &tail)?;
    Ok(certificate(d, Method::InfiniteWitness, f, [first, second]))
}

/// Witness `b` of finite σ-degree `n ≥ 4` (with `s ≢ 2 mod 4` when `n = 4`):
/// split the valuation, factor in `D_n`, bracket both factors with `b`.
pub fn decompose_with_witness<F: AutField>(
    d: &SkewRing<F>,
    b: &F::Elem,
    n: u64,
    f: &Series<F>,
) -> Result<Certificate<F::Elem>, DecomposeError> {
    let s = f.valuation().ok_or(DecomposeError::ZeroInput)?;
    let split = split_exponent(s, n)?;
    let (g, h) = factor_in_dn(d, f, split)?;
    let method = if n == 4 { Method::Order4Split } else { Method::DegreeAtLeast5 };
    Ok(certificate(d, method, f, [bracket_pair(d, b, &g)?, bracket_pair(d, b, &h)?]))
}

fn x_pair<F: AutField>(
    d: &SkewRing<F>,
    ctx: &Order4Ctx<F::Elem>,
    g: &Series<F>,
) -> Result<(Series<F>, Series<F>), DecomposeError> {
    let w = bracket_with_x(d, ctx, g)?;
    let x = d.monomial(d.field().one(), 1, 1 + w.relative_prec().max(1));
    Ok((x, w))
}

/// σ of order 4.
pub fn decompose_order4<F: AutField>(
    d: &SkewRing<F>,
    ctx: &Order4Ctx<F::Elem>,
    f: &Series<F>,
) -> Result<Certificate<F::Elem>, DecomposeError> {
    let k = d.field();
    let s = f.valuation().ok_or(DecomposeError::ZeroInput)?;
    if s.rem_euclid(4) != 2 {
        return decompose_with_witness(d, &ctx.y, 4, f);
    }
    let lead = f.leading_coeff().expect("nonzero");
    if !ctx.in_k1(k, lead) {
        let (f1, f2) = factor_over_l(d, ctx, f)?;
        let pairs = [x_pair(d, ctx, &f1)?, x_pair(d, ctx, &f2)?];
        return Ok(certificate(d, Method::Order4L, f, pairs));
    }
    // g = y f y⁻¹ has leading coefficient a_s · y · σ²(y⁻¹) ∉ k₁, and
    // f = [y⁻¹xy, y⁻¹w₁y] · [y⁻¹xy, y⁻¹w₂y] when g = [x, w₁][x, w₂].
    let y = &ctx.y;
    let y_inv = k.inv(y).expect("normal basis element is nonzero");
    let g = d.mul(&d.mul(&constant_for(d, y.clone(), f), f), &constant_for(d, y_inv.clone(), f));
    let (f1, f2) = factor_over_l(d, ctx, &g)?;
    let x_conj = k.mul(&y_inv, &k.sigma(y));
    let mut pairs = Vec::with_capacity(2);
    for fi in [f1, f2] {
        let w = bracket_with_x(d, ctx, &fi)?;
        let w_conj = d.mul(&d.mul(&constant_for(d, y_inv.clone(), &w), &w), &constant_for(d, y.clone(), &w));
        let p = d.monomial(x_conj.clone(), 1, 1 + w_conj.relative_prec().max(1));
        pairs.push((p, w_conj));
    }
    let second = pairs.pop().unwrap();
    let first = pairs.pop().unwrap();
    Ok(certificate(d, Method::Order4Conjugated, f, [first, second]))
}

/// Recomputes `[p₁,q₁]·[p₂,q₂]` and compares it with the input below the
/// certificate's check precision.
pub fn verify_certificate<F: AutField>(
    d: &SkewRing<F>,
    cert: &Certificate<F::Elem>,
) -> Result<bool, DecomposeError> {
    let k = d.field();
    let expected = format!("{} {}", k.field_spec(), k.sigma_spec());
    let found = format!("{} {}", cert.field, cert.sigma);
    if expected != found {
        return Err(DecomposeError::FieldMismatch { expected, found });
    }
    let [(p1, q1), (p2, q2)] = &cert.pairs;
    let product = d.mul(&d.commutator(p1, q1), &d.commutator(p2, q2));
    if product.prec() < cert.check_prec || cert.input.prec() < cert.check_prec {
        return Ok(false);
    }
    Ok(d.eq_to_prec(&product, &cert.input, cert.check_prec)?)
}

enum Strategy<E> {
    Infinite(E),
    Witness { b: E, n: u64 },
    Order4(Box<Order4Ctx<E>>),
    Unsupported(u64),
}

/// Chooses and caches the witness data for a field, then factors elements.
pub struct Decomposer<F: AutField> {
    ring: SkewRing<F>,
    strategy: Strategy<F::Elem>,
}

impl<F: AutField> Decomposer<F> {
    pub fn new(field: F) -> Result<Self, DecomposeError> {
        let strategy = match field.sigma_order() {
            SigmaOrder::Infinite => Strategy::Infinite(find_witness(&field, 5)?),
            SigmaOrder::Finite(1) => return Err(DecomposeError::IdentityAutomorphism),
            SigmaOrder::Finite(n @ (2 | 3)) => Strategy::Unsupported(n),
            SigmaOrder::Finite(4) => Strategy::Order4(Box::new(Order4Ctx::new(&field)?)),
            SigmaOrder::Finite(n) => Strategy::Witness { b: find_witness(&field, 5)?, n },
        };
        Ok(Decomposer { ring: SkewRing::new(field), strategy })
    }

    pub fn ring(&self) -> &SkewRing<F> {
        &self.ring
    }

    /// Witness element driving the bracket `[b, ·]`, if any.
    pub fn witness(&self) -> Option<&F::Elem> {
        match &self.strategy {
            Strategy::Infinite(b) | Strategy::Witness { b, .. } => Some(b),
            Strategy::Order4(ctx) => Some(&ctx.y),
            Strategy::Unsupported(_) => None,
        }
    }

    pub fn order4_ctx(&self) -> Option<&Order4Ctx<F::Elem>> {
        match &self.strategy {
            Strategy::Order4(ctx) => Some(ctx),
            _ => None,
        }
    }

    /// A verified certificate `f = [p₁,q₁]·[p₂,q₂]`.
    pub fn decompose(&self, f: &Series<F>) -> Result<Certificate<F::Elem>, DecomposeError> {
        let d = &self.ring;
        if let Strategy::Unsupported(n) = self.strategy {
            return Err(DecomposeError::UnsupportedOrder(n));
        }
        let cert = if f.is_zero() {
            // 0 = [b, 0]·[b, 0]; the second zero is known to O(x^0) so the
            // product keeps the input precision.
            let b = self.witness().cloned().unwrap_or_else(|| d.field().generator());
            let p = d.constant(b, 1);
            let pairs = [(p.clone(), d.zero(f.prec())), (p, d.zero(0))];
            certificate(d, Method::ZeroInput, f, pairs)
        } else {
            match &self.strategy {
                Strategy::Infinite(b) => decompose_infinite(d, b, f)?,
                Strategy::Witness { b, n } => decompose_with_witness(d, b, *n, f)?,
                Strategy::Order4(ctx) => decompose_order4(d, ctx, f)?,
                Strategy::Unsupported(_) => unreachable!(),
            }
        };
        if !verify_certificate(d, &cert)? {
            return Err(DecomposeError::VerificationFailed);
        }
        Ok(cert)
    }
}

#[cfg(test)]
mod tests;
