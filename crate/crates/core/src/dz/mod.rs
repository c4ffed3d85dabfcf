//! The ramification machinery: root counts `rho_F`, CRT root lifting, the
//! exact-divisor shift, witnesses `n_m`, Properties C/D/E, the greedy and
//! `omega` classifications, the heavy-`n` scan and cliques.

mod cliques;
mod omega;
mod properties;
mod roots;
mod suites;
mod witness;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::{poly_discriminant, IntPoly};
use crate::error::{Error, Result};
use crate::factorization::{factor_integer, is_prime_u64};
use crate::sieve::MfEntry;

pub use cliques::{find_cliques, satisfies_ecli, satisfies_enot, CliqueRecord, CliqueScan, CliqueType};
pub use omega::{
    classify_omega, heavy_n_scan, heavy_n_scan_with_threshold, omega_histogram, omega_thresholds, HeavyScan,
    OmegaClass, OmegaClassification, OmegaHistogram,
};
pub use properties::{
    property_c_sweep, property_d_witness, verify_property_d, verify_property_e, PropertyCReport, PropertyCSweep,
    PropertyDReport, PropertyEReport,
};
pub use roots::{all_crt_roots, crt_root, rho_f, CrtRoot, CRT_EXHAUSTIVE_LIMIT};
pub use suites::{lemma_suite, rho_suite, LemmaSuiteReport, RhoMismatch, RhoSuiteReport};
pub use witness::{
    build_witnesses, classify_greedy, exact_divides, recheck_witness, GreedyStats, WitnessBatch, WitnessChoice,
    WitnessRecord,
};

/// A squarefree positive integer together with its prime factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Squarefree {
    m: u64,
    primes: Vec<u64>,
}

impl Squarefree {
    pub fn one() -> Self {
        Squarefree { m: 1, primes: Vec::new() }
    }

    /// Builds `m` from distinct primes, in any order.
    pub fn from_primes(mut primes: Vec<u64>) -> Result<Self> {
        primes.sort_unstable();
        if primes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("repeated prime, not squarefree".into()));
        }
        let mut m: u64 = 1;
        for &p in &primes {
            if !is_prime_u64(p) {
                return Err(Error::Domain(format!("{p} is not prime")));
            }
            m = m
                .checked_mul(p)
                .ok_or_else(|| Error::Domain("product overflows 64 bits".into()))?;
        }
        Ok(Squarefree { m, primes })
    }

    /// Factors `m`; fails unless `m >= 1` is squarefree.
    pub fn factor(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("m must be positive".into()));
        }
        let fac = factor_integer(&BigInt::from(m), 1 << 16, 1 << 24)?;
        if !fac.is_complete() {
            return Err(Error::Domain(format!("could not factor {m}")));
        }
        if fac.factors.iter().any(|(_, e)| *e > 1) {
            return Err(Error::Domain(format!("{m} is not squarefree")));
        }
        let primes = fac.factors.iter().map(|(p, _)| p.to_u64().unwrap()).collect();
        Ok(Squarefree { m, primes })
    }

    pub fn value(&self) -> u64 {
        self.m
    }

    /// Prime factors, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn omega(&self) -> usize {
        self.primes.len()
    }

    /// `None` for `m = 1`.
    pub fn p_min(&self) -> Option<u64> {
        self.primes.first().copied()
    }
}

impl From<&MfEntry> for Squarefree {
    fn from(e: &MfEntry) -> Self {
        Squarefree {
            m: e.m,
            primes: e.primes.clone(),
        }
    }
}

impl fmt::Display for Squarefree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.m)
    }
}

/// A separable critical-value polynomial `F` with its discriminant cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    f: IntPoly,
    disc: BigInt,
}

impl Family {
    pub fn new(f: IntPoly) -> Result<Self> {
        if f.degree().unwrap_or(0) < 1 {
            return Err(Error::Domain("F must have positive degree".into()));
        }
        let disc = poly_discriminant(&f)?;
        if disc.is_zero() {
            return Err(Error::NotSeparable);
        }
        Ok(Family { f, disc })
    }

    pub fn poly(&self) -> &IntPoly {
        &self.f
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn degree(&self) -> usize {
        self.f.deg()
    }

    pub fn divides_discriminant(&self, p: u64) -> bool {
        self.disc.mod_floor(&BigInt::from(p)).is_zero()
    }
}

/// `F` with coefficients reduced modulo a fixed modulus, for fast repeated
/// evaluation.
#[derive(Clone, Debug)]
pub(crate) struct ResiduePoly {
    coeffs: Vec<u64>,
    modulus: u64,
}

impl ResiduePoly {
    pub(crate) fn new(f: &IntPoly, modulus: u64) -> Self {
        let big = BigInt::from(modulus);
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| c.mod_floor(&big).to_u64().unwrap())
            .collect();
        ResiduePoly { coeffs, modulus }
    }

    pub(crate) fn eval(&self, t: u64) -> u64 {
        let m = self.modulus as u128;
        let t = t as u128 % m;
        let mut acc: u128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * t + c as u128) % m;
        }
        acc as u64
    }
}
