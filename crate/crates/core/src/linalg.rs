//! Exact Gaussian elimination over a scalar field.
//!
//! Matrices are dense `Vec<Vec<S>>` in row-major order. All routines are
//! exact; the only scalar fields used are prime fields and the rationals.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// A field in which linear systems are solved.
pub trait ScalarField {
    type S: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::S;
    fn one(&self) -> Self::S;
    fn add(&self, a: &Self::S, b: &Self::S) -> Self::S;
    fn sub(&self, a: &Self::S, b: &Self::S) -> Self::S;
    fn mul(&self, a: &Self::S, b: &Self::S) -> Self::S;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::S) -> Option<Self::S>;

    fn is_zero(&self, a: &Self::S) -> bool {
        *a == self.zero()
    }

    fn neg(&self, a: &Self::S) -> Self::S {
        self.sub(&self.zero(), a)
    }
}

/// The prime field F_p with canonical representatives `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// `p` must be prime and below 2^31 so products fit in a `u64`.
    pub fn new(p: u64) -> Self {
        assert!((2..(1 << 31)).contains(&p), "prime modulus out of range: {p}");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl ScalarField for PrimeField {
    type S = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if (*a).is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl ScalarField for Rationals {
    type S = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

/// Reduced row-echelon form of a matrix.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    pub rows: Vec<Vec<S>>,
    /// Pivot column of each nonzero row, in increasing order.
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl<S> Echelon<S> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduces `rows` (each of length `ncols`) to reduced row-echelon form.
pub fn rref<K: ScalarField>(k: &K, mut rows: Vec<Vec<K::S>>, ncols: usize) -> Echelon<K::S> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !k.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = k.inv(&rows[r][c]).expect("pivot is nonzero");
        for v in rows[r].iter_mut() {
            *v = k.mul(v, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || k.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                let t = k.mul(&factor, p);
                *v = k.sub(v, &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Echelon { rows, pivots, ncols }
}

/// Rank of the matrix whose columns are `columns`.
pub fn rank<K: ScalarField>(k: &K, columns: &[Vec<K::S>]) -> usize {
    let Some(height) = columns.first().map(Vec::len) else {
        return 0;
    };
    rref(k, transpose(columns, height), columns.len()).rank()
}

/// Solves `Σ x_i · columns[i] = rhs`.
///
/// Returns the reduced-row-echelon particular solution (free variables
/// zero), or `None` when the system is inconsistent.
pub fn solve<K: ScalarField>(k: &K, columns: &[Vec<K::S>], rhs: &[K::S]) -> Option<Vec<K::S>> {
    let height = rhs.len();
    assert!(columns.iter().all(|c| c.len() == height), "column height mismatch");
    let n = columns.len();
    let mut rows = transpose(columns, height);
    for (row, b) in rows.iter_mut().zip(rhs) {
        row.push(b.clone());
    }
    let ech = rref(k, rows, n + 1);
    if ech.pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![k.zero(); n];
    for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
        x[pc] = row[n].clone();
    }
    Some(x)
}

/// A basis of `{x : Σ x_i · columns[i] = 0}` in echelon order: one vector
/// per free column, with that free variable set to one and the others zero.
pub fn nullspace<K: ScalarField>(k: &K, columns: &[Vec<K::S>]) -> Vec<Vec<K::S>> {
    let n = columns.len();
    let Some(height) = columns.first().map(Vec::len) else {
        return Vec::new();
    };
    let ech = rref(k, transpose(columns, height), n);
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !ech.pivots.contains(c)) {
        let mut x = vec![k.zero(); n];
        x[free] = k.one();
        for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
            x[pc] = k.neg(&row[free]);
        }
        basis.push(x);
    }
    basis
}

fn transpose<S: Clone>(columns: &[Vec<S>], height: usize) -> Vec<Vec<S>> {
    (0..height)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect()
}
