//! Randomized suites for the shift lemma and for `rho_F`.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::IntPoly;
use crate::error::Error;
use crate::sieve::build_pf;

use super::roots::{crt_root, rho_f};
use super::{Family, ResiduePoly, Squarefree};

fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> IntPoly {
    loop {
        let deg = rng.gen_range(1..=max_degree);
        let mut c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9..=9)).collect();
        if c[deg] == 0 {
            c[deg] = rng.gen_range(1..=9);
        }
        let f = IntPoly::from_i64s(&c).primitive_part();
        if f.deg() >= 1 {
            return f;
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LemmaSuiteReport {
    pub instances: usize,
    /// `shift_counts[l]` instances needed shift `l`.
    pub shift_counts: Vec<usize>,
    pub violations: Vec<(IntPoly, u64, BigInt)>,
    /// Other errors, which also indicate a broken kernel.
    pub errors: Vec<String>,
}

impl LemmaSuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.errors.is_empty() && self.instances > 0
    }

    pub fn max_shift(&self) -> usize {
        self.shift_counts.len().saturating_sub(1)
    }
}

/// Random separable `F` of degree at most 4, `m` a product of 2 or 3 primes
/// of `P_F` above `omega(m)`, and `n` a root of `F` modulo `m` plus a random
/// multiple of `m`.
pub fn lemma_suite(seed: u64, instances: usize) -> LemmaSuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = LemmaSuiteReport::default();
    while report.instances < instances {
        let Ok(family) = Family::new(random_poly(&mut rng, 4)) else {
            continue;
        };
        let Ok(sieve) = build_pf(family.poly(), 400) else {
            continue;
        };
        let usable: Vec<u64> = sieve.primes().iter().copied().filter(|&p| p > 3).collect();
        if usable.len() < 3 {
            continue;
        }
        let omega = rng.gen_range(2..=3);
        let primes: Vec<u64> = usable.choose_multiple(&mut rng, omega).copied().collect();
        let m = Squarefree::from_primes(primes).expect("distinct primes");
        let root = match crt_root(family.poly(), &m) {
            Ok(r) => r.n,
            Err(e) => {
                report.errors.push(format!("F = {}, m = {m}: {e}", family.poly()));
                report.instances += 1;
                continue;
            }
        };
        let n = BigInt::from(root) + BigInt::from(m.value()) * rng.gen_range(0..50u64);
        report.instances += 1;
        match family.exact_divisor_shift(&m, &n) {
            Ok(l) => {
                if report.shift_counts.len() <= l {
                    report.shift_counts.resize(l + 1, 0);
                }
                report.shift_counts[l] += 1;
            }
            Err(Error::LemmaViolation { m, n }) => report.violations.push((family.poly().clone(), m, n)),
            Err(e) => report.errors.push(format!("F = {}, m = {m}, n = {n}: {e}", family.poly())),
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoMismatch {
    pub f: IntPoly,
    pub m: u64,
    pub computed: u64,
    pub brute: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RhoSuiteReport {
    pub instances: usize,
    pub mismatches: Vec<RhoMismatch>,
    /// Coprime splits `m = a b` with `rho(m) != rho(a) rho(b)`.
    pub multiplicativity_failures: usize,
    /// Cases with `rho(m) > d^omega(m)`.
    pub bound_failures: usize,
}

impl RhoSuiteReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.multiplicativity_failures == 0 && self.bound_failures == 0 && self.instances > 0
    }
}

/// Compares `rho_F(m)` with a direct count of roots modulo `m` for random
/// primitive `F` and squarefree `m <= m_max`.
pub fn rho_suite(seed: u64, instances: usize, m_max: u64) -> RhoSuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = RhoSuiteReport::default();
    while report.instances < instances {
        let f = random_poly(&mut rng, 4);
        let Ok(m) = Squarefree::factor(rng.gen_range(1..=m_max)) else {
            continue;
        };
        let Ok(computed) = rho_f(&f, &m) else {
            continue;
        };
        report.instances += 1;
        let fm = ResiduePoly::new(&f, m.value());
        let brute = (0..m.value()).filter(|&n| fm.eval(n) == 0).count() as u64;
        if computed != brute {
            report.mismatches.push(RhoMismatch {
                f: f.clone(),
                m: m.value(),
                computed,
                brute,
            });
        }
        if computed > (f.deg() as u64).pow(m.omega() as u32) {
            report.bound_failures += 1;
        }
        if m.omega() >= 2 {
            let split = rng.gen_range(1..m.omega());
            let a = Squarefree::from_primes(m.primes()[..split].to_vec()).unwrap();
            let b = Squarefree::from_primes(m.primes()[split..].to_vec()).unwrap();
            if rho_f(&f, &a).unwrap() * rho_f(&f, &b).unwrap() != computed {
                report.multiplicativity_failures += 1;
            }
        }
    }
    report
}
