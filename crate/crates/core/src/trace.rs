//! Matrix representation over `K = k((xⁿ))` and the reduced trace.
//!
//! `D` is a right `K`-space with basis `1, x, …, x^{n−1}`. Column `j` of
//! `rep(f)` holds the coordinates of `f·x^j`: a term `a·x^{r+nq}` is
//! `x^r · σ^{−r}(a)·x^{nq}`. Entries are stored as ordinary series whose
//! nonzero exponents are all divisible by `n`.

use num_integer::Integer;
use thiserror::Error;

use crate::field::{AutField, SigmaOrder};
use crate::series::{SkewRing, SkewSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("the reduced trace needs σ of finite order")]
    InfiniteOrder,
}

/// An `n × n` matrix over `K`; `entries[r][j]` is row `r`, column `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixRep<E> {
    pub n: usize,
    pub entries: Vec<Vec<SkewSeries<E>>>,
}

fn order<F: AutField>(d: &SkewRing<F>) -> Result<i64, TraceError> {
    match d.field().sigma_order() {
        SigmaOrder::Finite(n) => Ok(n as i64),
        SigmaOrder::Infinite => Err(TraceError::InfiniteOrder),
    }
}

/// Least multiple of `n` that is `≥ p`.
fn round_up(p: i64, n: i64) -> i64 {
    Integer::div_ceil(&p, &n) * n
}

pub fn matrix_rep<F: AutField>(
    d: &SkewRing<F>,
    f: &SkewSeries<F::Elem>,
) -> Result<MatrixRep<F::Elem>, TraceError> {
    let n = order(d)?;
    let k = d.field();
    let mut entries = vec![Vec::with_capacity(n as usize); n as usize];
    for (r, row) in entries.iter_mut().enumerate() {
        let r = r as i64;
        for j in 0..n {
            let terms: Vec<_> = f
                .terms()
                .filter(|(i, a)| (i + j - r).rem_euclid(n) == 0 && !k.is_zero(a))
                .map(|(i, a)| (i + j - r, k.sigma_pow(a, -r)))
                .collect();
            let prec = round_up(f.prec() + j - r, n);
            row.push(d.from_terms(&terms, prec).expect("exponents lie below the entry precision"));
        }
    }
    Ok(MatrixRep { n: n as usize, entries })
}

/// Matrix product over `K`.
pub fn mat_mul<F: AutField>(
    d: &SkewRing<F>,
    a: &MatrixRep<F::Elem>,
    b: &MatrixRep<F::Elem>,
) -> MatrixRep<F::Elem> {
    assert_eq!(a.n, b.n, "matrix sizes differ");
    let n = a.n;
    let entries = (0..n)
        .map(|r| {
            (0..n)
                .map(|j| {
                    (1..n).fold(d.mul(&a.entries[r][0], &b.entries[0][j]), |acc, s| {
                        d.add(&acc, &d.mul(&a.entries[r][s], &b.entries[s][j]))
                    })
                })
                .collect()
        })
        .collect();
    MatrixRep { n, entries }
}

/// `trd(f) = Σ_{n | i} Tr(a_i)·x^i`, where `Tr(a) = Σ_{r<n} σ^r(a)`.
pub fn reduced_trace<F: AutField>(
    d: &SkewRing<F>,
    f: &SkewSeries<F::Elem>,
) -> Result<SkewSeries<F::Elem>, TraceError> {
    let rep = matrix_rep(d, f)?;
    let diag = (1..rep.n).fold(rep.entries[0][0].clone(), |acc, r| d.add(&acc, &rep.entries[r][r]));
    Ok(diag)
}
