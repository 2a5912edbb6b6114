//! Exact obstruction classes and gauge formality decisions.

pub mod ainf;
pub mod cli_io;
pub mod criteria;
pub mod error;
pub mod exact_algebra;
pub mod ns_operadic;
pub mod wg_dglie;

pub use error::{Error, Result};
pub use exact_algebra::{ExactField, Fp, Scalar};

/// Rational numbers with arbitrary precision.
pub type Rational = num_rational::BigRational;
pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;
