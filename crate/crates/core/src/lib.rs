//! Exact symbolic audit of generalized noncommutative residues for the
//! Dirac operator on manifolds with boundary.

pub mod audit;
pub mod cli;
pub mod clifford;
pub mod dsl;
pub mod error;
pub mod expected;
pub mod gamma;
pub mod oracle;
pub mod pipeline;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod symbol;
pub mod symbols;

pub use dsl::ExactSymbol;
pub use error::{Error, Result};
pub use scalar::{FieldScalar, GaussRat, Scalar};

/// Exact polynomial over the Gaussian rationals.
pub type ExactPoly = poly::Poly<GaussRat>;
/// Clifford element with exact polynomial coefficients.
pub type ExactClifford = clifford::Clifford<ExactPoly>;
pub type Poly64 = poly::Poly<num_complex::Complex64>;
pub type Poly32 = poly::Poly<num_complex::Complex32>;
