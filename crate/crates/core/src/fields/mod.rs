//! Fibers of the cover, their irreducibility, the odd-valuation
//! discriminant fingerprint, and the diversity census.

mod census;

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::algebra::{poly_discriminant, CurveCover, IntPoly};
use crate::error::{Error, Result};
use crate::factorization::{certify_prime, factor_over_z, irreducible_mod_some_prime, FactorBudget};

pub use census::{property_a_spot_check, run_census, CensusConfig, CensusRow, DiversityCensus, PropertyAReport};

/// Good primes tried before falling back to factorization over `Z`.
pub const FAST_PATH_PRIMES: usize = 10;

/// `g(n, u)` with its content removed.
pub fn fiber_poly(cover: &CurveCover, n: &BigInt) -> Result<IntPoly> {
    let f = cover.poly().specialize_t(n);
    if f.is_zero() {
        return Err(Error::DegenerateFiber {
            n: n.clone(),
            reason: "fiber polynomial vanishes".into(),
        });
    }
    if f.deg() < cover.nu() {
        return Err(Error::DegenerateFiber {
            n: n.clone(),
            reason: format!("degree drops from {} to {}", cover.nu(), f.deg()),
        });
    }
    Ok(f.primitive_part())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    Unknown,
}

impl fmt::Display for Irreducibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Irreducibility::Irreducible => "true",
            Irreducibility::Reducible => "false",
            Irreducibility::Unknown => "unknown",
        })
    }
}

/// Irreducibility of a primitive polynomial over `Q`.
pub fn poly_irreducibility(f: &IntPoly) -> Irreducibility {
    if f.deg() == 1 || irreducible_mod_some_prime(f, FAST_PATH_PRIMES).is_some() {
        return Irreducibility::Irreducible;
    }
    match factor_over_z(f) {
        Ok(fac) if fac.is_irreducible() => Irreducibility::Irreducible,
        Ok(_) => Irreducibility::Reducible,
        Err(_) => Irreducibility::Unknown,
    }
}

pub fn is_fiber_irreducible(cover: &CurveCover, n: &BigInt) -> Result<Irreducibility> {
    Ok(poly_irreducibility(&fiber_poly(cover, n)?))
}

/// The primes at which the discriminant of a defining polynomial has odd
/// valuation, and its sign. Both are invariants of the field it defines.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldFingerprint {
    pub negative: bool,
    /// Ascending.
    pub odd_primes: Vec<BigUint>,
    /// Unfactored part of the discriminant whose prime parities are unknown;
    /// 1 when the fingerprint is complete.
    pub unresolved: BigUint,
}

impl FieldFingerprint {
    pub fn is_complete(&self) -> bool {
        self.unresolved.is_one()
    }

    /// Whether the parity of `v_p(disc)` is known for the prime `p`.
    pub fn determines(&self, p: &BigUint) -> bool {
        !(&self.unresolved % p).is_zero()
    }

    fn has_odd(&self, p: &BigUint) -> bool {
        self.odd_primes.binary_search(p).is_ok()
    }
}

/// `-1;p1;p2`, with a trailing `?` when incomplete.
impl fmt::Display for FieldFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.negative {
            parts.push("-1".into());
        }
        parts.extend(self.odd_primes.iter().map(BigUint::to_string));
        f.write_str(&parts.join(";"))?;
        if !self.is_complete() {
            f.write_str("?")?;
        }
        Ok(())
    }
}

/// Fingerprint of the field defined by `f`, which should be irreducible.
pub fn fingerprint(f: &IntPoly, budget: FactorBudget) -> Result<FieldFingerprint> {
    let disc = poly_discriminant(f)?;
    if disc.is_zero() {
        return Err(Error::Domain("zero discriminant".into()));
    }
    let fac = budget.factor(&disc)?;
    let mut odd_primes: Vec<BigUint> = fac
        .factors
        .iter()
        .filter(|(_, e)| e % 2 == 1)
        .map(|(p, _)| p.clone())
        .collect();
    let mut unresolved = fac.cofactor.clone();
    if !unresolved.is_one() {
        if certify_prime(&unresolved) == Some(true) {
            odd_primes.push(std::mem::replace(&mut unresolved, BigUint::one()));
            odd_primes.sort();
        } else {
            let root = unresolved.sqrt();
            if &root * &root == unresolved {
                unresolved = BigUint::one();
            }
        }
    }
    Ok(FieldFingerprint {
        negative: disc.sign() == Sign::Minus,
        odd_primes,
        unresolved,
    })
}

/// True when the two fingerprints provably come from different fields:
/// different signs, or a prime whose parity is known on both sides and
/// differs.
pub fn definitely_distinct(a: &FieldFingerprint, b: &FieldFingerprint) -> bool {
    if a.negative != b.negative {
        return true;
    }
    let one_sided = |x: &FieldFingerprint, y: &FieldFingerprint| {
        x.odd_primes.iter().any(|p| y.determines(p) && !y.has_odd(p))
    };
    one_sided(a, b) || one_sided(b, a)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaValues {
    pub epsilon: f64,
    /// `delta * epsilon / 2`
    pub eta: f64,
    /// `1e-6 / ((g + nu) log(g + nu))`, when `g + nu` is supplied.
    pub fallback: Option<f64>,
}

/// `epsilon = 1 / (1000 log 2d)` and `eta = delta epsilon / 2`.
pub fn eta_exponent(d: usize, delta: f64, g_plus_nu: Option<usize>) -> Result<EtaValues> {
    if d == 0 {
        return Err(Error::Precondition("d must be at least 1".into()));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Precondition(format!("delta = {delta} outside (0, 1]")));
    }
    if g_plus_nu.is_some_and(|s| s < 2) {
        return Err(Error::Precondition("g + nu must be at least 2".into()));
    }
    let epsilon = 1.0 / (1000.0 * (2.0 * d as f64).ln());
    Ok(EtaValues {
        epsilon,
        eta: delta * epsilon / 2.0,
        fallback: g_plus_nu.map(|s| {
            let s = s as f64;
            1e-6 / (s * s.ln())
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn cover(text: &str) -> CurveCover {
        CurveCover::parse(text).unwrap()
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn primes(fp: &FieldFingerprint) -> Vec<u64> {
        fp.odd_primes.iter().map(|p| p.try_into().unwrap()).collect()
    }

    #[test]
    fn fiber_examples() {
        assert_eq!(fiber_poly(&cover("u^2 - t"), &big(5)).unwrap(), IntPoly::from_i64s(&[-5, 0, 1]));
        assert_eq!(
            fiber_poly(&cover("u^2 - t*(t-1)*(t-2)"), &big(3)).unwrap(),
            IntPoly::from_i64s(&[-6, 0, 1])
        );
        assert!(matches!(
            fiber_poly(&cover("t*u^2 - 1"), &big(0)),
            Err(Error::DegenerateFiber { .. })
        ));
        // content is removed
        assert_eq!(fiber_poly(&cover("2*u^2 - 2*t + t*u"), &big(2)).unwrap(), IntPoly::from_i64s(&[-2, 1, 1]));
    }

    #[test]
    fn irreducibility_examples() {
        let c = cover("u^2 - t");
        assert_eq!(is_fiber_irreducible(&c, &big(4)).unwrap(), Irreducibility::Reducible);
        assert_eq!(is_fiber_irreducible(&c, &big(5)).unwrap(), Irreducibility::Irreducible);
        let reducible: Vec<i64> = (1..=100)
            .filter(|&n| is_fiber_irreducible(&c, &big(n)).unwrap() == Irreducibility::Reducible)
            .collect();
        assert_eq!(reducible, (1..=10).map(|k| k * k).collect::<Vec<_>>());
    }

    #[test]
    fn fast_path_agrees_with_factorization() {
        let c = cover("u^3 - t*u - 1");
        for n in 1..200 {
            let f = fiber_poly(&c, &big(n)).unwrap();
            let exact = factor_over_z(&f).unwrap().is_irreducible();
            assert_eq!(poly_irreducibility(&f) == Irreducibility::Irreducible, exact, "n = {n}");
        }
    }

    #[test]
    fn fingerprint_examples() {
        let b = FactorBudget::default();
        let fp = fingerprint(&IntPoly::from_i64s(&[-12, 0, 1]), b).unwrap();
        assert_eq!((primes(&fp), fp.is_complete()), (vec![3], true));
        assert_eq!(primes(&fingerprint(&IntPoly::from_i64s(&[-2, 0, 1]), b).unwrap()), vec![2]);
        assert_eq!(primes(&fingerprint(&IntPoly::from_i64s(&[-5, 0, 1]), b).unwrap()), vec![5]);
        let neg = fingerprint(&IntPoly::from_i64s(&[3, 0, 1]), b).unwrap();
        assert!(neg.negative);
        assert_eq!(neg.to_string(), "-1;3");
        assert!(fingerprint(&IntPoly::from_i64s(&[1, 2, 1]), b).is_err());
    }

    #[test]
    fn partial_fingerprints() {
        // disc(u^2 - p q) = 4 p q with p, q beyond a tiny trial bound and
        // no rho effort at all
        let f = IntPoly::new(vec![BigInt::from(-(1_000_003i64 * 1_000_033)), BigInt::zero(), BigInt::one()]);
        let tiny = FactorBudget { trial_bound: 100, effort: 0 };
        let fp = fingerprint(&f, tiny).unwrap();
        assert!(!fp.is_complete());
        assert_eq!(fp.to_string(), "?");
        let full = fingerprint(&f, FactorBudget::default()).unwrap();
        assert_eq!(primes(&full), vec![1_000_003, 1_000_033]);
        assert!(!definitely_distinct(&fp, &full));
        let other = fingerprint(&IntPoly::from_i64s(&[-3, 0, 1]), tiny).unwrap();
        assert!(definitely_distinct(&fp, &other));

        // a squared cofactor leaves the parity known
        let sq = IntPoly::new(vec![BigInt::from(-3i64 * 1_000_003 * 1_000_003), BigInt::zero(), BigInt::one()]);
        let fp = fingerprint(&sq, FactorBudget { trial_bound: 100, effort: 0 }).unwrap();
        assert!(fp.is_complete());
        assert_eq!(primes(&fp), vec![3]);
    }

    #[test]
    fn distinctness_rules() {
        let b = FactorBudget::default();
        let fp = |c: &[i64]| fingerprint(&IntPoly::from_i64s(c), b).unwrap();
        assert!(!definitely_distinct(&fp(&[-3, 0, 1]), &fp(&[-12, 0, 1])));
        assert!(definitely_distinct(&fp(&[-3, 0, 1]), &fp(&[-6, 0, 1])));
        assert!(definitely_distinct(&fp(&[-3, 0, 1]), &fp(&[3, 0, 1])));
    }

    #[test]
    fn eta_examples() {
        let e = eta_exponent(1, 1.0, None).unwrap();
        assert!((e.epsilon - 1.4427e-3).abs() < 1e-7);
        assert!((e.eta - 7.213e-4).abs() < 1e-7);
        let e = eta_exponent(2, 0.5, Some(2)).unwrap();
        assert!((e.eta - 1.803e-4).abs() < 1e-7);
        assert!((e.fallback.unwrap() - 1e-6 / (2.0 * 2f64.ln())).abs() < 1e-15);
        assert!(eta_exponent(1, 0.0, None).is_err());
        assert!(eta_exponent(1, 1.5, None).is_err());
        assert!(eta_exponent(0, 0.5, None).is_err());
    }
}
