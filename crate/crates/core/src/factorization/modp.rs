//! Polynomials over `F_p` for word-sized primes and their factorization by
//! squarefree decomposition, distinct-degree and equal-degree splitting.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::IntPoly;
use crate::error::{Error, Result};

const SPLIT_SEED: u64 = 0x5eed_f00d;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Polynomial over `F_p`, coefficients in `[0, p)`, trimmed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { p, coeffs }
    }

    /// Reduction of an integer polynomial.
    pub fn from_int_poly(f: &IntPoly, p: u64) -> Self {
        let pb = BigInt::from(p);
        Self::new(
            p,
            f.coeffs()
                .iter()
                .map(|c| c.mod_floor(&pb).to_u64().unwrap())
                .collect(),
        )
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    fn zero(p: u64) -> Self {
        ModPoly { p, coeffs: vec![] }
    }

    fn one(p: u64) -> Self {
        ModPoly { p, coeffs: vec![1] }
    }

    fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lc(), self.p);
        self.scale(inv)
    }

    fn scale(&self, s: u64) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|&c| mul_mod(c, s, self.p)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(
            self.p,
            (0..n)
                .map(|i| {
                    (self.coeffs.get(i).copied().unwrap_or(0) + o.coeffs.get(i).copied().unwrap_or(0)) % self.p
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(
            self.p,
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).copied().unwrap_or(0);
                    let b = o.coeffs.get(i).copied().unwrap_or(0);
                    (a + self.p - b) % self.p
                })
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        Self::new(p, out)
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial mod p");
        let p = self.p;
        if self.coeffs.len() < d.coeffs.len() {
            return (Self::zero(p), self.clone());
        }
        let inv = inv_mod(d.lc(), p);
        let dd = d.degree();
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; self.coeffs.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mul_mod(r[k + dd], inv, p);
            q[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mul_mod(c, dc, p)) % p;
            }
        }
        r.truncate(dd);
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::zero(p));
        let (mut t0, mut t1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod(r0.lc(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p))
                .collect(),
        )
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    /// Lifts to integer coefficients in `[0, p)`.
    pub fn to_int_poly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) mod {}", self.to_int_poly(), self.p)
    }
}

/// Complete factorization of a polynomial over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPolyFactorization {
    pub p: u64,
    /// Leading coefficient of the input.
    pub unit: u64,
    /// Monic irreducible factors with multiplicities, sorted by degree then
    /// coefficients.
    pub factors: Vec<(ModPoly, usize)>,
}

impl ModPolyFactorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self) -> ModPoly {
        let mut acc = ModPoly::new(self.p, vec![self.unit]);
        for (f, e) in &self.factors {
            for _ in 0..*e {
                acc = acc.mul(f);
            }
        }
        acc
    }

    /// Sorted list of factor degrees, repeated by multiplicity.
    pub fn degree_pattern(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(f, e)| std::iter::repeat_n(f.degree(), *e))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

fn check_prime_modulus(p: u64) -> Result<()> {
    if p < 2 || p >= 1 << 32 || !super::is_prime_u64(p) {
        return Err(Error::Domain(format!("modulus {p} is not a prime below 2^32")));
    }
    Ok(())
}

fn reduce_nonzero(f: &IntPoly, p: u64) -> Result<ModPoly> {
    check_prime_modulus(p)?;
    let fp = ModPoly::from_int_poly(f, p);
    if fp.is_zero() {
        return Err(Error::Domain(format!("polynomial vanishes identically mod {p}")));
    }
    Ok(fp)
}

/// Squarefree decomposition of a monic polynomial: `(g, e)` pairs with
/// `f = prod g^e`, each `g` squarefree and monic.
fn squarefree_decomposition(f: &ModPoly) -> Vec<(ModPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    if f.degree() == 0 {
        return out;
    }
    let fd = f.derivative();
    if fd.is_zero() {
        // f is a p-th power
        let root = pth_root(f);
        for (g, e) in squarefree_decomposition(&root) {
            out.push((g, e * p as usize));
        }
        return out;
    }
    let mut c = f.gcd(&fd);
    let mut w = f.divrem(&c).0;
    let mut i = 1;
    while w.degree() > 0 {
        let y = w.gcd(&c);
        let z = w.divrem(&y).0;
        if z.degree() > 0 {
            out.push((z.monic(), i));
        }
        i += 1;
        w = y;
        c = c.divrem(&w).0;
    }
    if c.degree() > 0 {
        let root = pth_root(&c.monic());
        for (g, e) in squarefree_decomposition(&root) {
            out.push((g, e * p as usize));
        }
    }
    out
}

fn pth_root(f: &ModPoly) -> ModPoly {
    let p = f.p as usize;
    ModPoly::new(
        f.p,
        f.coeffs.iter().step_by(p).copied().collect(),
    )
}

/// Splits a squarefree monic polynomial into products of irreducibles of
/// equal degree: `(g_d, d)` with `g_d` the product of all degree-`d` factors.
fn distinct_degree(f: &ModPoly) -> Vec<(ModPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = ModPoly::x(p);
    let mut h = x.clone();
    let mut d = 0;
    while rest.degree() >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(p as u128, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree() > 0 {
            rest = rest.divrem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if rest.degree() > 0 {
        let deg = rest.degree();
        out.push((rest.monic(), deg));
    }
    out
}

/// Equal-degree splitting (Cantor-Zassenhaus; trace map in characteristic 2).
fn equal_degree(f: &ModPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let n = f.degree();
    if n == d {
        return vec![f.monic()];
    }
    let p = f.p;
    loop {
        let a = ModPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree() == 0 {
            continue;
        }
        let b = if p == 2 {
            let mut acc = a.clone();
            let mut term = a.clone();
            for _ in 1..d {
                term = term.mul(&term).rem(f);
                acc = acc.add(&term);
            }
            acc
        } else {
            // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p-1)/2)
            let mut norm = a.clone();
            let mut frob = a.clone();
            for _ in 1..d {
                frob = frob.powmod(p as u128, f);
                norm = norm.mul(&frob).rem(f);
            }
            norm.powmod(((p - 1) / 2) as u128, f).sub(&ModPoly::one(p))
        };
        let g = f.gcd(&b);
        if g.degree() > 0 && g.degree() < n {
            let h = f.divrem(&g).0;
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h.monic(), d, rng));
            return out;
        }
    }
}

fn factor_monic_squarefree(f: &ModPoly, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f) {
        out.extend(equal_degree(&g, d, rng));
    }
    out
}

/// Complete factorization of `f mod p` into monic irreducibles.
pub fn factor_mod_p(f: &IntPoly, p: u64) -> Result<ModPolyFactorization> {
    let fp = reduce_nonzero(f, p)?;
    Ok(factor_modpoly(&fp))
}

pub(crate) fn factor_modpoly(fp: &ModPoly) -> ModPolyFactorization {
    let p = fp.p;
    let unit = fp.lc();
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut factors = Vec::new();
    for (g, e) in squarefree_decomposition(&fp.monic()) {
        for h in factor_monic_squarefree(&g, &mut rng) {
            factors.push((h, e));
        }
    }
    factors.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then(a.0.coeffs.cmp(&b.0.coeffs)));
    // merge equal factors that arrived through different squarefree layers
    let mut merged: Vec<(ModPoly, usize)> = Vec::new();
    for (h, e) in factors {
        match merged.last_mut() {
            Some((last, m)) if *last == h => *m += e,
            _ => merged.push((h, e)),
        }
    }
    ModPolyFactorization { p, unit, factors: merged }
}

/// Distinct roots of `f` modulo `p`, sorted ascending.
pub fn roots_mod_p(f: &IntPoly, p: u64) -> Result<Vec<u64>> {
    let fp = reduce_nonzero(f, p)?;
    Ok(roots_of_modpoly(&fp))
}

pub(crate) fn roots_of_modpoly(fp: &ModPoly) -> Vec<u64> {
    let p = fp.p;
    if fp.degree() == 0 {
        return vec![];
    }
    if p <= 64 {
        return (0..p).filter(|&r| fp.eval(r) == 0).collect();
    }
    let x = ModPoly::x(p);
    let linear = fp.gcd(&x.powmod(p as u128, fp).sub(&x));
    if linear.degree() == 0 {
        return vec![];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut roots: Vec<u64> = equal_degree(&linear, 1, &mut rng)
        .into_iter()
        .map(|l| (p - l.coeffs[0]) % p)
        .collect();
    roots.sort_unstable();
    roots
}

/// Whether `f` has at least one root mod `p`; cheaper than listing them.
pub(crate) fn has_root_modpoly(fp: &ModPoly) -> bool {
    let p = fp.p;
    match fp.degree() {
        0 => false,
        1 => true,
        _ if p <= 64 => (0..p).any(|r| fp.eval(r) == 0),
        _ => {
            let x = ModPoly::x(p);
            fp.gcd(&x.powmod(p as u128, fp).sub(&x)).degree() > 0
        }
    }
}
