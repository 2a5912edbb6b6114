//! Exact fields, sparse linear algebra and graded bookkeeping.

mod field;
mod graded;
mod sparse;

pub use field::{is_prime, scalar_from_str, ExactField, Fp, Scalar};
pub use graded::{ChainComplex, GradedModule};
pub use sparse::{
    augmented_ranks, from_sparse, image_membership, inverse, kernel_basis, pivot_columns, rank,
    solve_linear, to_sparse, SparseMap, SparseVec,
};
