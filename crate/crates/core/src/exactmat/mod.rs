//! Exact integer matrices and polynomials.

mod matrix;
mod poly;

pub use matrix::{
    char_poly_det, char_poly_monic, is_irreducible, mat_power_trace, perron_bounds, PerronBracket,
    SignedIntMatrix,
};
pub use poly::IntPolynomial;
