//! Root counts and CRT roots of `F` modulo squarefree `m`.

use crate::algebra::IntPoly;
use crate::error::{Error, Result};
use crate::factorization::ModPoly;
use crate::factorization::{inv_mod, roots_of_modpoly};

use super::Squarefree;

/// Above this many root combinations [`crt_root`] stops minimizing.
pub const CRT_EXHAUSTIVE_LIMIT: u64 = 10_000;

/// Roots of `F` modulo each prime of `m`, in the order of `m.primes()`.
fn root_table(f: &IntPoly, m: &Squarefree) -> Result<Vec<Vec<u64>>> {
    m.primes()
        .iter()
        .map(|&p| {
            let fp = ModPoly::from_int_poly(f, p);
            if fp.is_zero() {
                return Err(Error::Domain(format!("{p} divides the content of F")));
            }
            Ok(roots_of_modpoly(&fp))
        })
        .collect()
}

/// Number of `n` in `[0, m)` with `m | F(n)`.
pub fn rho_f(f: &IntPoly, m: &Squarefree) -> Result<u64> {
    Ok(root_table(f, m)?.iter().map(|r| r.len() as u64).product())
}

/// CRT idempotents: `e_i = 1 mod p_i`, `0 mod p_j` for `j != i`.
fn crt_basis(m: &Squarefree) -> Vec<u64> {
    let big = m.value();
    m.primes()
        .iter()
        .map(|&p| {
            let q = big / p;
            let inv = inv_mod(q % p, p);
            ((q as u128 * inv as u128) % big as u128) as u64
        })
        .collect()
}

fn combine(residues: impl Iterator<Item = u64>, basis: &[u64], m: u64) -> u64 {
    let mut acc: u128 = 0;
    for (r, &e) in residues.zip(basis) {
        acc = (acc + r as u128 * e as u128) % m as u128;
    }
    acc as u64
}

/// Visits every choice of one root per prime.
fn for_each_combination(table: &[Vec<u64>], basis: &[u64], m: u64, mut visit: impl FnMut(u64)) {
    let mut idx = vec![0usize; table.len()];
    loop {
        visit(combine(idx.iter().zip(table).map(|(&i, r)| r[i]), basis, m));
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return;
            }
            idx[pos] += 1;
            if idx[pos] < table[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrtRoot {
    pub n: u64,
    /// False when `rho_F(m)` exceeded [`CRT_EXHAUSTIVE_LIMIT`] and `n` is the
    /// combination of the smallest roots rather than the minimum.
    pub exhaustive: bool,
}

/// Smallest `n` in `[0, m)` with `m | F(n)`.
pub fn crt_root(f: &IntPoly, m: &Squarefree) -> Result<CrtRoot> {
    let table = root_table(f, m)?;
    if let Some(i) = table.iter().position(Vec::is_empty) {
        return Err(Error::NoRoot { p: m.primes()[i] });
    }
    let basis = crt_basis(m);
    let rho: u64 = table.iter().map(|r| r.len() as u64).product();
    if rho > CRT_EXHAUSTIVE_LIMIT {
        let n = combine(table.iter().map(|r| r[0]), &basis, m.value());
        return Ok(CrtRoot { n, exhaustive: false });
    }
    let mut best = u64::MAX;
    for_each_combination(&table, &basis, m.value(), |n| best = best.min(n));
    Ok(CrtRoot { n: best, exhaustive: true })
}

/// Every `n` in `[0, m)` with `m | F(n)`, ascending.
pub fn all_crt_roots(f: &IntPoly, m: &Squarefree) -> Result<Vec<u64>> {
    let table = root_table(f, m)?;
    if table.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }
    let basis = crt_basis(m);
    let mut out = Vec::new();
    for_each_combination(&table, &basis, m.value(), |n| out.push(n));
    out.sort_unstable();
    Ok(out)
}

/// Roots of `F` modulo each prime of `m`; empty lists where none exist.
pub(crate) fn roots_per_prime(f: &IntPoly, m: &Squarefree) -> Result<Vec<Vec<u64>>> {
    root_table(f, m)
}

/// The CRT residue of one root choice per prime.
pub(crate) fn crt_combine(m: &Squarefree, residues: &[u64]) -> u64 {
    combine(residues.iter().copied(), &crt_basis(m), m.value())
}
