//! Exact scalars, finite fields and block-structured multivariate polynomials.

pub mod field;
pub mod parse;
pub mod poly;
pub mod scalar;

pub use field::FieldDescriptor;
pub use parse::parse_poly;
pub use poly::{arith, ArithOp, Block, BlockPolynomial, Degree, Monomial, Var, VarDecl};
pub use scalar::{Ring, Scalar};

/// Builds `F_{p^e}` with its canonical modulus.
pub fn build_field(p: u32, e: u32) -> crate::Result<FieldDescriptor> {
    FieldDescriptor::build(p, e)
}
