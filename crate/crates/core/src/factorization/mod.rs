//! Factorization kernels: polynomials over `F_p` and `Z`, and integers.

mod integer;
mod modp;
mod zassenhaus;

pub use integer::{
    certification_limit, certify_prime, factor_integer, is_prime_u64, FactorBudget, IntFactorization,
};
pub(crate) use modp::{has_root_modpoly, inv_mod, roots_of_modpoly};
pub use modp::{factor_mod_p, roots_mod_p, ModPoly, ModPolyFactorization};
pub use zassenhaus::{factor_over_z, good_prime, irreducible_mod_some_prime, ZFactorization};
