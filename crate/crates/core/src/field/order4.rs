use super::{k0_rank, k0_solve, normal_basis_element, AutField, FieldError, SigmaOrder};

/// Basis data for σ of order four.
///
/// With `y` a normal basis element: `L = Im(σ − 1)` has basis
/// `y − σy, σy − σ²y, σ²y − σ³y`; `k₁ = {σz = −z}` is spanned by
/// `e₁ = y − σy + σ²y − σ³y`; `k₂ = {σ²z = −z}` is spanned by `e₂ = y − σ²y`
/// and `σ(e₂)`.
#[derive(Clone, Debug)]
pub struct Order4Ctx<E> {
    pub y: E,
    /// `σ^j(y)` for `j = 0..4`.
    pub orbit: [E; 4],
    pub l_basis: [E; 3],
    pub e1: E,
    pub e2: E,
    pub k2_basis: [E; 2],
}

impl<E: Clone + PartialEq> Order4Ctx<E> {
    pub fn new<F: AutField<Elem = E>>(field: &F) -> Result<Self, FieldError> {
        let found = field.sigma_order();
        if found != SigmaOrder::Finite(4) {
            return Err(FieldError::WrongOrder { expected: 4, found });
        }
        let y = normal_basis_element(field)?;
        let orbit: [E; 4] = std::array::from_fn(|j| field.sigma_pow(&y, j as i64));
        let l_basis: [E; 3] = std::array::from_fn(|j| field.sub(&orbit[j], &orbit[j + 1]));
        let e1 = field.sub(&field.add(&orbit[0], &orbit[2]), &field.add(&orbit[1], &orbit[3]));
        let e2 = field.sub(&orbit[0], &orbit[2]);
        let k2_basis = [e2.clone(), field.sigma(&e2)];
        Ok(Order4Ctx { y, orbit, l_basis, e1, e2, k2_basis })
    }

    pub fn in_l<F: AutField<Elem = E>>(&self, field: &F, c: &E) -> Result<bool, FieldError> {
        Ok(k0_solve(field, &self.l_basis, c)?.is_some())
    }

    /// `σ(c) = −c`.
    pub fn in_k1<F: AutField<Elem = E>>(&self, field: &F, c: &E) -> bool {
        field.sigma(c) == field.neg(c)
    }

    /// `σ²(c) = −c`.
    pub fn in_k2<F: AutField<Elem = E>>(&self, field: &F, c: &E) -> bool {
        field.sigma_pow(c, 2) == field.neg(c)
    }

    /// k₀-linear independence of a pair.
    pub fn independent<F: AutField<Elem = E>>(&self, field: &F, a: &E, b: &E) -> Result<bool, FieldError> {
        Ok(k0_rank(field, &[a.clone(), b.clone()])? == 2)
    }

    /// `dim_{k₀}(aL + bL)`.
    pub fn dim_al_plus_bl<F: AutField<Elem = E>>(&self, field: &F, a: &E, b: &E) -> Result<usize, FieldError> {
        let gens: Vec<E> = self
            .l_basis
            .iter()
            .map(|l| field.mul(a, l))
            .chain(self.l_basis.iter().map(|l| field.mul(b, l)))
            .collect();
        k0_rank(field, &gens)
    }

    /// Some `z` with `σ(z) − z = c`.
    ///
    /// Solved against the images `σ^{j+1}(y) − σ^j(y)` of the normal basis;
    /// the free coordinate (on `σ³y`) is pinned to zero.
    pub fn sigma_minus_one_preimage<F: AutField<Elem = E>>(&self, field: &F, c: &E) -> Result<E, FieldError> {
        let images: Vec<E> = (0..4)
            .map(|j| field.sub(&self.orbit[(j + 1) % 4], &self.orbit[j]))
            .collect();
        let lambda = k0_solve(field, &images, c)?.ok_or(FieldError::NotInL)?;
        let mut z = field.zero();
        for (l, yj) in lambda.iter().zip(&self.orbit) {
            z = field.add(&z, &field.mul(l, yj));
        }
        Ok(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{k0_coords, GaloisField};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f81() -> GaloisField {
        GaloisField::new(3, 4, 1).unwrap()
    }

    #[test]
    fn context_invariants() {
        let k = f81();
        let ctx = Order4Ctx::new(&k).unwrap();
        assert_eq!(k0_rank(&k, &ctx.orbit).unwrap(), 4);
        assert_eq!(k0_rank(&k, &ctx.l_basis).unwrap(), 3);
        assert!(ctx.in_k1(&k, &ctx.e1));
        assert!(ctx.in_k2(&k, &ctx.e2));
        assert!(ctx.in_k2(&k, &ctx.k2_basis[1]));
        for e in [&ctx.e1, &ctx.e2, &ctx.k2_basis[1]] {
            assert!(ctx.in_l(&k, e).unwrap());
        }
        // y completes L to a basis, so it is not in L.
        assert!(!ctx.in_l(&k, &ctx.y).unwrap());
        assert_eq!(k0_coords(&k, &ctx.y, &ctx.l_basis), Err(FieldError::NotInSpan));
    }

    #[test]
    fn e1_coordinates_in_l() {
        // e₁ = (y − σy) + (σ²y − σ³y).
        let k = f81();
        let ctx = Order4Ctx::new(&k).unwrap();
        let c = k0_coords(&k, &ctx.e1, &ctx.l_basis).unwrap();
        assert_eq!(c, vec![k.one(), k.zero(), k.one()]);
    }

    #[test]
    fn preimage_of_sigma_minus_one() {
        let k = f81();
        let ctx = Order4Ctx::new(&k).unwrap();
        let c = k.sub(&k.sigma(&ctx.y), &ctx.y);
        assert_eq!(ctx.sigma_minus_one_preimage(&k, &c).unwrap(), ctx.y);
        assert_eq!(ctx.sigma_minus_one_preimage(&k, &k.zero()).unwrap(), k.zero());
        assert_eq!(ctx.sigma_minus_one_preimage(&k, &ctx.y), Err(FieldError::NotInL));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let z = k.random_elem(&mut rng);
            let c = k.sub(&k.sigma(&z), &z);
            let w = ctx.sigma_minus_one_preimage(&k, &c).unwrap();
            assert_eq!(k.sub(&k.sigma(&w), &w), c);
        }
    }

    #[test]
    fn wrong_order_rejected() {
        let k = GaloisField::new(2, 5, 1).unwrap();
        assert!(matches!(Order4Ctx::new(&k), Err(FieldError::WrongOrder { expected: 4, .. })));
    }

    #[test]
    fn order_four_over_larger_fixed_field() {
        // F_{2^8} with σ = Frobenius²: k₀ = F_4.
        let k = GaloisField::new(2, 8, 2).unwrap();
        let ctx = Order4Ctx::new(&k).unwrap();
        assert_eq!(k0_rank(&k, &ctx.orbit).unwrap(), 4);
        assert_eq!(k0_rank(&k, &ctx.l_basis).unwrap(), 3);
    }
}
