//! Exact arithmetic in skew Laurent series division rings `k((σ;x))` and a
//! constructive factorization of every element into a product of two
//! commutators, with re-checkable certificates.

pub mod field;
pub mod linalg;
pub mod series;
pub mod decompose;
pub mod text;
pub mod trace;
pub mod cli;
