//! Exact integer polynomial arithmetic: resultants, discriminants,
//! squarefree parts and the critical-value polynomial of a plane cover.

mod bivariate;
mod parse;
mod poly;
mod resultant;

pub use bivariate::{
    critical_polynomial, discriminant_in_u, squarefree_primitive_part, BivPoly, CurveCover,
};
pub use parse::parse_bivariate;
pub use poly::IntPoly;
pub use resultant::{poly_discriminant, resultant};
