//! Exact linear algebra: scalar fields, sparse matrices, elimination and
//! the sparse-matrix text format.

pub mod echelon;
pub mod field;
pub mod sparse;
pub mod text;

pub use echelon::{
    rank_sparse, rank_sparse_with, rref_sparse, rref_sparse_with, EchelonForm,
    IncrementalEchelon, Limits,
};
pub use field::{Field, FieldSpec, PrimeField, Rationals, DEFAULT_PRIME, EVIDENCE_PRIMES};
pub use sparse::{SparseMatrix, SparseRow};
