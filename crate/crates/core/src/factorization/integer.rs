//! Integer factorization by trial division and Pollard-Brent rho, with
//! deterministic Miller-Rabin certification.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::modp::mul_mod;
use crate::error::{Error, Result};

/// Bases making Miller-Rabin deterministic below 3.317 * 10^24.
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Upper end of the range in which [`MR_BASES`] certify primality.
pub fn certification_limit() -> BigUint {
    "3317044064679887385961981".parse().unwrap()
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &b in &MR_BASES {
        if n == b {
            return true;
        }
        if n % b == 0 {
            return false;
        }
    }
    let (s, d) = split_pow2(n - 1);
    'bases: for &a in &MR_BASES[..12] {
        let mut x = super::modp::pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn split_pow2(m: u64) -> (u32, u64) {
    let s = m.trailing_zeros();
    (s, m >> s)
}

/// Primality: `Some(true)` certified prime, `Some(false)` composite, `None`
/// when `n` is beyond the certification range and no witness was found.
pub fn certify_prime(n: &BigUint) -> Option<bool> {
    if let Some(v) = n.to_u64() {
        return Some(is_prime_u64(v));
    }
    for &b in &MR_BASES {
        if (n % b).is_zero() {
            return Some(false);
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        let mut witness = true;
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                witness = false;
                break;
            }
        }
        if witness {
            return Some(false);
        }
    }
    if *n < certification_limit() {
        Some(true)
    } else {
        None
    }
}

/// Result of [`factor_integer`]: `value = sign * prod p^e * cofactor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntFactorization {
    pub value: BigInt,
    pub sign: Sign,
    /// Certified primes, ascending, with exponents.
    pub factors: Vec<(BigUint, u32)>,
    /// Unfactored remainder, 1 when the factorization is complete.
    pub cofactor: BigUint,
}

impl IntFactorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    pub fn reassemble(&self) -> BigInt {
        let mut acc = BigInt::from_biguint(Sign::Plus, self.cofactor.clone());
        for (p, e) in &self.factors {
            acc *= BigInt::from_biguint(Sign::Plus, p.pow(*e));
        }
        if self.sign == Sign::Minus {
            -acc
        } else {
            acc
        }
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }
}

/// Work limits for [`factor_integer`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorBudget {
    pub trial_bound: u64,
    pub effort: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: 1 << 16,
            effort: 1 << 20,
        }
    }
}

impl FactorBudget {
    pub fn factor(&self, n: &BigInt) -> Result<IntFactorization> {
        factor_integer(n, self.trial_bound, self.effort)
    }
}

/// Trial division up to `trial_bound`, then Pollard-Brent rho with at most
/// `effort` iterations in total. Whatever cannot be split or certified is
/// left in the cofactor.
pub fn factor_integer(nval: &BigInt, trial_bound: u64, effort: u64) -> Result<IntFactorization> {
    if nval.is_zero() {
        return Err(Error::Domain("cannot factor zero".into()));
    }
    let sign = if nval.sign() == Sign::Minus { Sign::Minus } else { Sign::Plus };
    let mut rest = nval.magnitude().clone();
    let mut primes: Vec<(BigUint, u32)> = Vec::new();

    trial_divide(&mut rest, trial_bound, &mut primes);

    let mut cofactor = BigUint::one();
    let mut budget = effort;
    let mut stack = vec![rest];
    while let Some(r) = stack.pop() {
        if r.is_one() {
            continue;
        }
        match certify_prime(&r) {
            Some(true) => {
                primes.push((r, 1));
                continue;
            }
            None => {
                cofactor *= r;
                continue;
            }
            Some(false) => {}
        }
        if let Some(root) = exact_sqrt(&r) {
            stack.push(root.clone());
            stack.push(root);
            continue;
        }
        match rho_split(&r, &mut budget) {
            Some(d) => {
                let other = &r / &d;
                stack.push(d);
                stack.push(other);
            }
            None => cofactor *= r,
        }
    }

    primes.sort();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    for (p, e) in primes {
        match factors.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => factors.push((p, e)),
        }
    }
    // A cofactor may still share primes found elsewhere; pull them out.
    for (p, e) in factors.iter_mut() {
        while !cofactor.is_one() && (&cofactor % &*p).is_zero() {
            cofactor /= &*p;
            *e += 1;
        }
    }
    Ok(IntFactorization {
        value: nval.clone(),
        sign,
        factors,
        cofactor,
    })
}

fn trial_divide(rest: &mut BigUint, bound: u64, out: &mut Vec<(BigUint, u32)>) {
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            out.push((BigUint::from(p), e));
        }
    };
    let mut d = 2u64;
    while d <= bound {
        if let Some(small) = rest.to_u64() {
            // word-sized fast path
            let mut r = small;
            while d <= bound && d.saturating_mul(d) <= r {
                let mut e = 0;
                while r % d == 0 {
                    r /= d;
                    e += 1;
                }
                push(d, e);
                d += if d == 2 { 1 } else { 2 };
            }
            if r > 1 && d.saturating_mul(d) > r {
                push(r, 1);
                r = 1;
            }
            *rest = BigUint::from(r);
            return;
        }
        let mut e = 0;
        while (&*rest % d).is_zero() {
            *rest /= d;
            e += 1;
        }
        push(d, e);
        d += if d == 2 { 1 } else { 2 };
    }
}

fn exact_sqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn rho_split(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    for c in 1u64.. {
        if *budget == 0 {
            return None;
        }
        let found = match n.to_u64() {
            Some(small) => brent_u64(small, c, budget).map(BigUint::from),
            None => brent_big(n, &BigUint::from(c), budget),
        };
        if found.is_some() {
            return found;
        }
    }
    unreachable!()
}

const BATCH: u64 = 128;

fn brent_u64(n: u64, c: u64, budget: &mut u64) -> Option<u64> {
    let f = |v: u64| ((mul_mod(v, v, n) as u128 + c as u128) % n as u128) as u64;
    let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
    let mut q = 1u64;
    let mut g = 1u64;
    let mut r = 1u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let steps = BATCH.min(r - k);
            if *budget < steps {
                *budget = 0;
                return None;
            }
            *budget -= steps;
            for _ in 0..steps {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn abs_diff(a: &BigUint, b: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

fn brent_big(n: &BigUint, c: &BigUint, budget: &mut u64) -> Option<BigUint> {
    let f = |v: &BigUint| (v * v + c) % n;
    let two = BigUint::from(2u32);
    let (mut x, mut y, mut ys) = (two.clone(), two.clone(), two);
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut r = 1u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let steps = BATCH.min(r - k);
            if *budget < steps {
                *budget = 0;
                return None;
            }
            *budget -= steps;
            for _ in 0..steps {
                y = f(&y);
                q = (&q * abs_diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == *n {
        loop {
            ys = f(&ys);
            g = abs_diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (g != *n).then_some(g)
}
