//! Computational companion to the ramification argument for diversity of
//! number fields in parametric families.
//!
//! From a plane cover `g(t, u) = 0` the crate derives the critical-value
//! polynomial `F`, sieves the primes at which `F` has a root, enumerates the
//! special squarefree set `M_F(x)`, builds exact-divisor witnesses `n_m`, and
//! counts distinct fiber fields by their odd-valuation discriminant
//! fingerprint.

pub mod algebra;
pub mod dz;
pub mod error;
pub mod factorization;
pub mod fields;
pub mod sieve;

pub use error::{Error, Result};
