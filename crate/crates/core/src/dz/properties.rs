//! Empirical checks of the local Properties C, D and E.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::IntPoly;
use crate::error::{Error, Result};
use crate::factorization::{roots_mod_p, FactorBudget};
use crate::sieve::{prime_sieve, ChebotarevSieve};

use super::{Family, ResiduePoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyCReport {
    pub p: u64,
    /// Values `n` with `p^2 | F(n)` that were tested.
    pub checked: usize,
    /// Those `n` for which `p || F(n + p)` failed.
    pub violations: Vec<u64>,
}

impl Family {
    /// Tests `p^2 | F(n)  =>  p || F(n + p)` on up to `trials` values of `n`,
    /// found by lifting the roots of `F` modulo `p` to `p^2`.
    pub fn verify_property_c(&self, p: u64, trials: usize) -> Result<PropertyCReport> {
        if self.divides_discriminant(p) {
            return Err(Error::Precondition(format!("{p} divides the discriminant")));
        }
        let roots = roots_mod_p(self.poly(), p)
            .map_err(|_| Error::Precondition(format!("{p} divides the content of F")))?;
        let p2 = p
            .checked_mul(p)
            .ok_or_else(|| Error::Domain(format!("{p}^2 overflows 64 bits")))?;
        let fp2 = ResiduePoly::new(self.poly(), p2);
        let lifts: Vec<u64> = roots
            .iter()
            .flat_map(|&r| (0..p).map(move |j| r + j * p))
            .filter(|&t| fp2.eval(t) == 0)
            .collect();

        let mut report = PropertyCReport {
            p,
            checked: 0,
            violations: Vec::new(),
        };
        let mut round = 0u64;
        while report.checked < trials && !lifts.is_empty() {
            for &t in &lifts {
                if report.checked == trials {
                    break;
                }
                let n = if t == 0 { p2 * (round + 1) } else { t + p2 * round };
                report.checked += 1;
                if fp2.eval(n + p) == 0 {
                    report.violations.push(n);
                }
            }
            round += 1;
        }
        Ok(report)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropertyCSweep {
    pub primes_checked: usize,
    pub instances: usize,
    /// Primes dividing the discriminant, which the property does not cover.
    pub skipped: Vec<u64>,
    pub violations: Vec<(u64, u64)>,
}

/// Property C for every prime up to `limit`.
pub fn property_c_sweep(family: &Family, limit: u64, trials: usize) -> PropertyCSweep {
    let mut out = PropertyCSweep::default();
    for p in prime_sieve(limit) {
        match family.verify_property_c(p, trials) {
            Ok(r) => {
                out.primes_checked += 1;
                out.instances += r.checked;
                out.violations.extend(r.violations.into_iter().map(|n| (p, n)));
            }
            Err(_) => out.skipped.push(p),
        }
    }
    out
}

/// Smallest `n` in `[1, 2p]` with `p || F(n)`.
pub fn property_d_witness(f: &IntPoly, p: u64) -> Option<u64> {
    let roots = roots_mod_p(f, p).ok()?;
    let fp2 = ResiduePoly::new(f, p.checked_mul(p)?);
    let mut candidates: Vec<u64> = roots
        .iter()
        .flat_map(|&r| [r, r + p, r + 2 * p])
        .filter(|&n| (1..=2 * p).contains(&n))
        .collect();
    candidates.sort_unstable();
    candidates.into_iter().find(|&n| fp2.eval(n) != 0)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropertyDReport {
    pub checked: usize,
    /// Primes of `P_F` with no `n <= 2p` such that `p || F(n)`.
    pub failures: Vec<u64>,
    /// Every prime above this passed.
    pub threshold: u64,
}

/// Property D for every prime of `P_F` up to `limit`.
pub fn verify_property_d(sieve: &ChebotarevSieve, limit: u64) -> PropertyDReport {
    let mut out = PropertyDReport::default();
    for &p in sieve.primes().iter().take_while(|&&p| p <= limit) {
        out.checked += 1;
        if property_d_witness(sieve.poly(), p).is_none() {
            out.failures.push(p);
            out.threshold = p;
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropertyEReport {
    pub d: usize,
    pub checked: usize,
    /// `n` with `F(n) = 0`.
    pub zeros: Vec<u64>,
    /// `n` whose factorization was incomplete.
    pub indeterminate: Vec<u64>,
    /// `(n, count)` with more than `d` prime divisors `p >= n / 4`.
    pub exceptions: Vec<(u64, usize)>,
    /// Every determinate `n` from here on passed.
    pub threshold: u64,
}

impl PropertyEReport {
    pub fn passes(&self, cap: usize) -> bool {
        self.exceptions.len() <= cap
    }
}

/// Counts the prime divisors `p >= n / 4` of `F(n)` over `range`.
pub fn verify_property_e(
    f: &IntPoly,
    d: usize,
    range: RangeInclusive<u64>,
    budget: FactorBudget,
) -> Result<PropertyEReport> {
    let mut out = PropertyEReport {
        d,
        threshold: *range.start(),
        ..Default::default()
    };
    for n in range {
        out.checked += 1;
        let v = f.eval(&BigInt::from(n));
        if v.is_zero() {
            out.zeros.push(n);
            continue;
        }
        let fac = budget.factor(&v)?;
        if !fac.is_complete() {
            out.indeterminate.push(n);
            continue;
        }
        let count = fac
            .factors
            .iter()
            .filter(|(p, _)| p.to_u128().is_none_or(|p| 4 * p >= n as u128))
            .count();
        if count > d {
            out.exceptions.push((n, count));
            out.threshold = n + 1;
        }
    }
    Ok(out)
}
