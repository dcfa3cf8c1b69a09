//! Coefficient fields `k` carrying a non-identity automorphism σ.
//!
//! Two concrete families are provided: finite fields `F_{p^m}` with a power
//! of Frobenius ([`GaloisField`]) and the rational function field `Q(t)` with
//! a shift or scaling ([`RationalFunctionField`]). Everything above this layer
//! is generic over [`AutField`].

mod gf;
mod k0;
mod order4;
mod ratfunc;

use std::fmt::Debug;

use num_bigint::BigInt;
use rand::RngCore;
use thiserror::Error;

pub use gf::{default_modulus, GaloisField, GfElem};
pub use k0::{k0_coords, k0_rank, k0_relation, k0_solve, normal_basis_element, solve_k0_linear};
pub use order4::Order4Ctx;
pub use ratfunc::{QPoly, RatFunc, RationalFunctionField, TwistKind};

use crate::linalg::ScalarField;

/// Order of the automorphism σ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SigmaOrder {
    Finite(u64),
    Infinite,
}

/// Result of a capped σ-degree search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaDegree {
    Finite(u64),
    InfiniteBeyondCap,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("σ is the identity automorphism")]
    IdentityAutomorphism,
    #[error("no element of σ-degree ≥ {min_degree}: σ has order {order}")]
    NoWitness { order: u64, min_degree: u64 },
    #[error("no normal basis element found after {0} candidates")]
    NormalBasisSearchExhausted(usize),
    #[error("element is not in the k₀-span of the given basis")]
    NotInSpan,
    #[error("element is not in L = Im(σ − 1)")]
    NotInL,
    #[error("{0}")]
    InvalidField(String),
    #[error("k₀-linear algebra requires a finite-dimensional extension k/k₀")]
    NoFiniteBasis,
    #[error("this operation requires σ of order {expected}, found {found:?}")]
    WrongOrder { expected: u64, found: SigmaOrder },
}

/// An exact field `k` with a distinguished automorphism σ ≠ id.
///
/// Implementations are immutable after construction and cheap to clone.
#[allow(clippy::wrong_self_convention)]
pub trait AutField: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;
    /// Scalars of the prime subfield, used for all k₀-linear algebra.
    type Scalars: ScalarField;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly when `a` is zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// σ^i(a); `i` may be negative.
    fn sigma_pow(&self, a: &Self::Elem, i: i64) -> Self::Elem;
    fn sigma_order(&self) -> SigmaOrder;

    /// The field generator: `g` for finite fields, `t` for `Q(t)`.
    fn generator(&self) -> Self::Elem;
    /// Name of the generator in the text grammar.
    fn generator_symbol(&self) -> &'static str;
    /// An element of provably infinite σ-degree, when σ has infinite order.
    fn designated_witness(&self) -> Option<Self::Elem>;
    fn characteristic(&self) -> u64;

    fn random_elem(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// Canonical text form, parseable by [`crate::text`].
    fn format_elem(&self, a: &Self::Elem) -> String;
    /// Field description, e.g. `gf(3^4)` or `qt`.
    fn field_spec(&self) -> String;
    /// Automorphism description, e.g. `frob^1` or `shift`.
    fn sigma_spec(&self) -> String;

    fn scalars(&self) -> &Self::Scalars;
    /// Coordinates over the prime field, when k is finite over it.
    fn prime_coords(&self, a: &Self::Elem) -> Option<Vec<<Self::Scalars as ScalarField>::S>>;
    /// An F_p-basis of the fixed field k₀, when k is finite over F_p.
    fn k0_prime_basis(&self) -> Option<&[Self::Elem]>;
    /// Embeds a prime-field scalar into k.
    fn from_scalar(&self, s: &<Self::Scalars as ScalarField>::S) -> Self::Elem;

    fn sigma(&self, a: &Self::Elem) -> Self::Elem {
        self.sigma_pow(a, 1)
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    fn random_nonzero(&self, rng: &mut dyn RngCore) -> Self::Elem {
        loop {
            let a = self.random_elem(rng);
            if !self.is_zero(&a) {
                return a;
            }
        }
    }
}

/// Least `m ≤ cap` with σ^m(a) = a, or `InfiniteBeyondCap`.
pub fn sigma_degree<F: AutField>(field: &F, a: &F::Elem, cap: u64) -> SigmaDegree {
    assert!(cap >= 1, "cap must be positive");
    let mut cur = a.clone();
    for m in 1..=cap {
        cur = field.sigma(&cur);
        if cur == *a {
            return SigmaDegree::Finite(m);
        }
    }
    SigmaDegree::InfiniteBeyondCap
}

/// An element whose σ-degree is at least `min_degree`.
///
/// For infinite order this is the designated witness (`t` for `Q(t)`); for
/// finite order `n ≥ min_degree` it is a normal basis element, which has
/// σ-degree exactly `n`.
pub fn find_witness<F: AutField>(field: &F, min_degree: u64) -> Result<F::Elem, FieldError> {
    match field.sigma_order() {
        SigmaOrder::Infinite => field.designated_witness().ok_or(FieldError::NoFiniteBasis),
        SigmaOrder::Finite(n) if n < min_degree => Err(FieldError::NoWitness { order: n, min_degree }),
        SigmaOrder::Finite(_) => normal_basis_element(field),
    }
}

/// Applies σ^i to `a`; alias kept for the field-level vocabulary.
pub fn apply_sigma<F: AutField>(field: &F, a: &F::Elem, i: i64) -> F::Elem {
    field.sigma_pow(a, i)
}

/// Sum `Σ_{r<n} σ^r(a)`: the trace of `a` down to k₀ for σ of order `n`.
pub fn field_trace<F: AutField>(field: &F, a: &F::Elem) -> Result<F::Elem, FieldError> {
    let SigmaOrder::Finite(n) = field.sigma_order() else {
        return Err(FieldError::NoFiniteBasis);
    };
    let mut acc = field.zero();
    for r in 0..n as i64 {
        acc = field.add(&acc, &field.sigma_pow(a, r));
    }
    Ok(acc)
}
