//! k₀-linear algebra on a field finite over its prime subfield.
//!
//! A k₀-combination `Σ λ_i g_i` is expanded over F_p: with `w_1..w_d` an
//! F_p-basis of k₀, the unknowns are the F_p-coordinates of each `λ_i`, and
//! the columns are the coordinates of `w_j · g_i`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{AutField, FieldError, SigmaOrder};
use crate::linalg::{self, ScalarField};

type Scalar<F> = <<F as AutField>::Scalars as ScalarField>::S;

const NORMAL_BASIS_SEED: u64 = 0x5eed_0f4b_a515;
const NORMAL_BASIS_RETRIES: usize = 256;

fn k0_basis<F: AutField>(field: &F) -> Result<&[F::Elem], FieldError> {
    field.k0_prime_basis().ok_or(FieldError::NoFiniteBasis)
}

fn coords<F: AutField>(field: &F, a: &F::Elem) -> Result<Vec<Scalar<F>>, FieldError> {
    field.prime_coords(a).ok_or(FieldError::NoFiniteBasis)
}

fn expanded_columns<F: AutField>(field: &F, gens: &[F::Elem]) -> Result<Vec<Vec<Scalar<F>>>, FieldError> {
    let w = k0_basis(field)?;
    let mut cols = Vec::with_capacity(gens.len() * w.len());
    for g in gens {
        for wj in w {
            cols.push(coords(field, &field.mul(wj, g))?);
        }
    }
    Ok(cols)
}

fn fold_k0<F: AutField>(field: &F, x: &[Scalar<F>], count: usize) -> Vec<F::Elem> {
    let w = field.k0_prime_basis().expect("checked by caller");
    let d = w.len();
    (0..count)
        .map(|i| {
            let mut acc = field.zero();
            for (wj, xij) in w.iter().zip(&x[i * d..(i + 1) * d]) {
                if field.scalars().is_zero(xij) {
                    continue;
                }
                let s = field.from_scalar(xij);
                acc = field.add(&acc, &field.mul(&s, wj));
            }
            acc
        })
        .collect()
}

/// k₀-coefficients `λ` with `Σ λ_i gens_i = target`, or `None`.
///
/// When `gens` are dependent the echelon particular solution is returned
/// (free variables zero).
pub fn k0_solve<F: AutField>(
    field: &F,
    gens: &[F::Elem],
    target: &F::Elem,
) -> Result<Option<Vec<F::Elem>>, FieldError> {
    let cols = expanded_columns(field, gens)?;
    let rhs = coords(field, target)?;
    if cols.is_empty() {
        return Ok(field.is_zero(target).then(Vec::new));
    }
    Ok(linalg::solve(field.scalars(), &cols, &rhs).map(|x| fold_k0(field, &x, gens.len())))
}

/// Coordinates of `a` against a k₀-independent `basis`.
pub fn k0_coords<F: AutField>(field: &F, a: &F::Elem, basis: &[F::Elem]) -> Result<Vec<F::Elem>, FieldError> {
    k0_solve(field, basis, a)?.ok_or(FieldError::NotInSpan)
}

/// Dimension of the k₀-span of `elems`.
pub fn k0_rank<F: AutField>(field: &F, elems: &[F::Elem]) -> Result<usize, FieldError> {
    let d = k0_basis(field)?.len();
    let cols = expanded_columns(field, elems)?;
    Ok(linalg::rank(field.scalars(), &cols) / d)
}

/// The first echelon relation `Σ λ_i gens_i = 0` with `λ ≠ 0`, if any.
pub fn k0_relation<F: AutField>(field: &F, gens: &[F::Elem]) -> Result<Option<Vec<F::Elem>>, FieldError> {
    let cols = expanded_columns(field, gens)?;
    Ok(linalg::nullspace(field.scalars(), &cols)
        .into_iter()
        .next()
        .map(|x| fold_k0(field, &x, gens.len())))
}

/// Solves `Σ x_i · columns[i] = rhs` over the scalar field underlying k₀.
pub fn solve_k0_linear<F: AutField>(
    field: &F,
    columns: &[Vec<Scalar<F>>],
    rhs: &[Scalar<F>],
) -> Option<Vec<Scalar<F>>> {
    linalg::solve(field.scalars(), columns, rhs)
}

/// A normal basis element: `y` with `{σ^j(y) : 0 ≤ j < n}` a k₀-basis of k.
///
/// Randomized search with a fixed seed, so the result is reproducible.
pub fn normal_basis_element<F: AutField>(field: &F) -> Result<F::Elem, FieldError> {
    let n = match field.sigma_order() {
        SigmaOrder::Finite(n) => n,
        SigmaOrder::Infinite => return Err(FieldError::NoFiniteBasis),
    };
    k0_basis(field)?;
    let mut rng = ChaCha8Rng::seed_from_u64(NORMAL_BASIS_SEED);
    for _ in 0..NORMAL_BASIS_RETRIES {
        let y = field.random_nonzero(&mut rng);
        let orbit: Vec<F::Elem> = (0..n as i64).map(|j| field.sigma_pow(&y, j)).collect();
        if k0_rank(field, &orbit)? == n as usize {
            return Ok(y);
        }
    }
    Err(FieldError::NormalBasisSearchExhausted(NORMAL_BASIS_RETRIES))
}
