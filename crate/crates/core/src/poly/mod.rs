//! Exact multigraded polynomials, their parser, monomial bases and exact
//! linear algebra over the rationals.

mod ambient;
mod basis;
mod degree;
mod linalg;
mod parse;
mod polynomial;
mod section;

pub use ambient::{Ambient, AmbientKind};
pub use basis::{cohomology_basis, monomial_basis};
pub use degree::MultiDegree;
pub use linalg::ExactMatrix;
pub use parse::parse_poly;
pub use polynomial::{Exponents, RationalPolynomial};
pub use section::{cohomology_section_matrix, section_matrix, PolyMatrix};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("bad ambient: {0}")]
    BadAmbient(String),
    #[error("entry ({row},{col}) is not homogeneous of degree {expected}: {entry}")]
    Homogeneity { row: usize, col: usize, expected: MultiDegree, entry: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
}
