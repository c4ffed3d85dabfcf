//! Prime sieving, the Chebotarev prime set `P_F`, and enumeration of the
//! special squarefree set `M_F(x)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::{poly_discriminant, IntPoly};
use crate::error::{Error, Result};
use crate::factorization::{factor_integer, has_root_modpoly, roots_mod_p, ModPoly};

const SEGMENT: u64 = 1 << 16;

/// All primes `<= limit`, by a segmented sieve of Eratosthenes.
pub fn prime_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    let mut small = vec![true; (root + 1) as usize];
    small[0] = false;
    small[1] = false;
    let mut i = 2;
    while i * i <= root {
        if small[i as usize] {
            let mut j = i * i;
            while j <= root {
                small[j as usize] = false;
                j += i;
            }
        }
        i += 1;
    }
    let base: Vec<u64> = (2..=root).filter(|&i| small[i as usize]).collect();

    let mut out = Vec::new();
    let mut lo = 2u64;
    let mut seg = vec![true; SEGMENT as usize];
    while lo <= limit {
        let hi = (lo + SEGMENT - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        seg[..len].fill(true);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let start = (p * p).max(lo.div_ceil(p) * p);
            let mut j = start;
            while j <= hi {
                seg[(j - lo) as usize] = false;
                j += p;
            }
        }
        out.extend((0..len).filter(|&k| seg[k]).map(|k| lo + k as u64));
        lo = hi + 1;
    }
    out
}

/// Primes up to `limit` not dividing `Delta_F` at which `F` has a root.
#[derive(Clone, Debug)]
pub struct ChebotarevSieve {
    f: IntPoly,
    disc: BigInt,
    limit: u64,
    primes_in_pf: Vec<u64>,
    prime_count: usize,
}

impl ChebotarevSieve {
    pub fn poly(&self) -> &IntPoly {
        &self.f
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes_in_pf
    }

    /// `pi(limit)`
    pub fn prime_count(&self) -> usize {
        self.prime_count
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes_in_pf.binary_search(&p).is_ok()
    }

    /// `|P_F ∩ [2, limit]| / pi(limit)` as an exact ratio.
    pub fn delta_ratio(&self) -> (usize, usize) {
        (self.primes_in_pf.len(), self.prime_count)
    }

    pub fn delta_hat(&self) -> f64 {
        if self.prime_count == 0 {
            return 0.0;
        }
        self.primes_in_pf.len() as f64 / self.prime_count as f64
    }
}

/// Sieves `P_F` up to `limit`.
pub fn build_pf(f: &IntPoly, limit: u64) -> Result<ChebotarevSieve> {
    if f.deg() < 1 {
        return Err(Error::Domain("P_F needs a polynomial of positive degree".into()));
    }
    let disc = poly_discriminant(f)?;
    if disc.is_zero() {
        return Err(Error::NotSeparable);
    }
    let primes = prime_sieve(limit);
    let prime_count = primes.len();
    let primes_in_pf = primes
        .into_iter()
        .filter(|&p| {
            if (&disc % p).is_zero() {
                return false;
            }
            let fp = ModPoly::from_int_poly(f, p);
            !fp.is_zero() && has_root_modpoly(&fp)
        })
        .collect();
    Ok(ChebotarevSieve {
        f: f.clone(),
        disc,
        limit,
        primes_in_pf,
        prime_count,
    })
}

/// Outcome of comparing the measured density with `1/d`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityFloorReport {
    pub delta_hat: f64,
    pub d: usize,
    /// `1/d - slack`
    pub threshold: f64,
    /// `delta_hat - threshold`; nonnegative iff the check passes.
    pub margin: f64,
    pub pass: bool,
}

/// Finite-sample slack on the density floor.
pub const DENSITY_SLACK: f64 = 0.05;

/// Checks `delta_hat >= 1/d - 0.05`.
pub fn check_density_floor(sieve: &ChebotarevSieve, d: usize) -> Result<DensityFloorReport> {
    if d == 0 {
        return Err(Error::Precondition("d must be positive".into()));
    }
    if sieve.prime_count < 100 {
        return Err(Error::Precondition(format!(
            "density floor needs pi(limit) >= 100, got {}",
            sieve.prime_count
        )));
    }
    let delta_hat = sieve.delta_hat();
    let threshold = 1.0 / d as f64 - DENSITY_SLACK;
    let margin = delta_hat - threshold;
    Ok(DensityFloorReport {
        delta_hat,
        d,
        threshold,
        margin,
        pass: margin >= 0.0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamMode {
    Paper,
    Override,
}

impl fmt::Display for ParamMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParamMode::Paper => "paper",
            ParamMode::Override => "override",
        })
    }
}

/// `epsilon = 1 / (1000 log 2d)`
pub fn default_epsilon(d: usize) -> f64 {
    1.0 / (1e3 * (2.0 * d as f64).ln())
}

/// Parameter bundle defining `M_F(x)`.
///
/// In paper mode `kappa = log log x`, `k = floor(eps * delta * log log x) + 1`,
/// `y = exp((log x)^(1 - eps))`, the tail exponent is 9/10 and the window is
/// `[x/(2 kappa), x/kappa]`. Override mode replaces any of `k`, `y`, the tail
/// exponent and the window.
#[derive(Clone, Debug, PartialEq)]
pub struct DiversityParams {
    x: f64,
    epsilon: f64,
    delta: f64,
    kappa: f64,
    k: usize,
    y: f64,
    tail_exponent: f64,
    window: Option<(u64, u64)>,
    d: usize,
    mode: ParamMode,
}

impl DiversityParams {
    pub fn paper(x: f64, epsilon: f64, delta: f64, d: usize) -> Result<Self> {
        if !(x >= 16.0) || !x.is_finite() {
            return Err(Error::Params(format!("x = {x} must be finite and at least 16")));
        }
        if !(epsilon > 0.0 && epsilon <= 0.5) {
            return Err(Error::Params(format!("epsilon = {epsilon} must lie in (0, 1/2]")));
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::Params(format!("delta = {delta} must lie in (0, 1]")));
        }
        if d == 0 {
            return Err(Error::Params("d must be positive".into()));
        }
        let (kappa, k, y) = Self::formulas(x, epsilon, delta);
        Ok(DiversityParams {
            x,
            epsilon,
            delta,
            kappa,
            k,
            y,
            tail_exponent: 0.9,
            window: None,
            d,
            mode: ParamMode::Paper,
        })
    }

    fn formulas(x: f64, epsilon: f64, delta: f64) -> (f64, usize, f64) {
        let kappa = x.ln().ln();
        let k = (epsilon * delta * kappa).floor() as usize + 1;
        let y = x.ln().powf(1.0 - epsilon).exp();
        (kappa, k, y)
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self.mode = ParamMode::Override;
        self
    }

    pub fn with_y(mut self, y: f64) -> Self {
        self.y = y;
        self.mode = ParamMode::Override;
        self
    }

    /// Exponent `a` in `p_max(m) >= x^a`; 0 disables the constraint.
    pub fn with_tail(mut self, tail_exponent: f64) -> Self {
        self.tail_exponent = tail_exponent;
        self.mode = ParamMode::Override;
        self
    }

    pub fn with_window(mut self, lo: u64, hi: u64) -> Self {
        self.window = Some((lo, hi));
        self.mode = ParamMode::Override;
        self
    }

    /// Same overrides at a different `x`; the window is recomputed from `x`
    /// unless it was set explicitly.
    pub fn rescaled(&self, x: f64) -> Result<Self> {
        let mut out = Self::paper(x, self.epsilon, self.delta, self.d)?;
        if self.mode == ParamMode::Override {
            out.k = self.k;
            out.y = self.y;
            out.tail_exponent = self.tail_exponent;
            out.window = self.window;
            out.mode = ParamMode::Override;
        }
        Ok(out)
    }

    /// Checks the invariants; in paper mode the derived values must match
    /// the formulas.
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 0.5) {
            return Err(Error::Params("epsilon outside (0, 1/2]".into()));
        }
        if !(0.0..=1.0).contains(&self.tail_exponent) {
            return Err(Error::Params("tail exponent outside [0, 1]".into()));
        }
        if let Some((lo, hi)) = self.window {
            if lo > hi {
                return Err(Error::Params(format!("empty window [{lo}, {hi}]")));
            }
        }
        if self.mode == ParamMode::Paper {
            let (kappa, k, y) = Self::formulas(self.x, self.epsilon, self.delta);
            if kappa != self.kappa || k != self.k || y != self.y || self.tail_exponent != 0.9 || self.window.is_some() {
                return Err(Error::Params("paper-mode parameters do not match the formulas".into()));
            }
        }
        Ok(())
    }

    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn tail_exponent(&self) -> f64 {
        self.tail_exponent
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn mode(&self) -> ParamMode {
        self.mode
    }

    /// Integer window on `m`; the real bounds are rounded outward.
    pub fn window(&self) -> (u64, u64) {
        self.window.unwrap_or_else(|| {
            let lo = (self.x / (2.0 * self.kappa)).floor() as u64;
            let hi = (self.x / self.kappa).ceil() as u64;
            (lo, hi)
        })
    }

    /// Smallest admissible prime factor.
    pub fn y_min(&self) -> u64 {
        self.y.ceil().max(2.0) as u64
    }

    /// Smallest admissible largest prime factor.
    pub fn tail_min(&self) -> u64 {
        if self.tail_exponent == 0.0 {
            return 1;
        }
        self.x.powf(self.tail_exponent).ceil() as u64
    }
}

/// One element `m = m1 * P` of `M_F(x)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MfEntry {
    pub m: u64,
    /// Prime factors, ascending.
    pub primes: Vec<u64>,
}

impl MfEntry {
    /// `P = p_max(m)`
    pub fn large_prime(&self) -> u64 {
        *self.primes.last().expect("m > 1")
    }

    /// `m1 = m / p_max(m)`
    pub fn cofactor(&self) -> u64 {
        self.m / self.large_prime()
    }

    pub fn omega(&self) -> usize {
        self.primes.len()
    }

    /// `p1*p2*...`
    pub fn factorization_string(&self) -> String {
        self.primes
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join("*")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MfEnumeration {
    pub entries: Vec<MfEntry>,
    /// Set when the enumeration is empty, with a diagnosis of why.
    pub warning: Option<String>,
}

/// Enumerates `M_F(x)`: squarefree `m` over `P_F` with `omega(m) = k + 1`,
/// `p_min(m) >= y`, `p_max(m) >= x^tail` and `m` in the window.
///
/// Every such `m` is `m1 * P` with `P = p_max(m)`, so the search runs over
/// `k`-subsets `m1` and then over the admissible range of `P`.
pub fn enumerate_mf(sieve: &ChebotarevSieve, params: &DiversityParams) -> Result<MfEnumeration> {
    params.validate()?;
    let (lo, hi) = params.window();
    let y_min = params.y_min();
    // the largest prime any element can contain is hi / y_min^k
    let smallest_m1 = (y_min as u128).saturating_pow(params.k() as u32);
    let largest_prime = (hi as u128 / smallest_m1.max(1)) as u64;
    if sieve.limit() < largest_prime {
        return Err(Error::Precondition(format!(
            "sieve limit {} below the largest admissible prime {largest_prime}",
            sieve.limit()
        )));
    }
    let tail_min = params.tail_min();
    let primes: Vec<u64> = sieve
        .primes()
        .iter()
        .copied()
        .filter(|&p| p >= y_min && p <= hi)
        .collect();

    let mut entries = Vec::new();
    let mut chosen: Vec<u64> = Vec::with_capacity(params.k());
    extend_subsets(&primes, 0, params.k(), 1, hi, &mut chosen, &mut |m1, small| {
        let floor = small.last().map_or(0, |&q| q + 1).max(tail_min).max(lo.div_ceil(m1));
        let ceil = hi / m1;
        if floor > ceil {
            return;
        }
        let start = primes.partition_point(|&p| p < floor);
        for &big in primes[start..].iter().take_while(|&&p| p <= ceil) {
            let mut ps = small.to_vec();
            ps.push(big);
            entries.push(MfEntry { m: m1 * big, primes: ps });
        }
    });
    entries.sort();

    let warning = entries.is_empty().then(|| {
        let y_pow = (y_min as f64).powi(params.k() as i32 + 1);
        let mut why = format!(
            "M_F(x) is empty ({} mode): x = {}, k + 1 = {}, y = {:.6e}, window = [{lo}, {hi}], x^tail = {tail_min}",
            params.mode(),
            params.x(),
            params.k() + 1,
            params.y(),
        );
        if y_pow > hi as f64 {
            why.push_str(&format!(
                "; y^(k+1) = {y_pow:.3e} exceeds the window end, so no product of k + 1 admissible primes fits"
            ));
        } else if tail_min > hi {
            why.push_str("; the tail bound exceeds the window end");
        } else if primes.is_empty() {
            why.push_str("; no prime of P_F lies in [y, window end]");
        }
        why
    });
    Ok(MfEnumeration { entries, warning })
}

/// Visits every increasing `remaining`-subset of `primes[from..]` whose
/// product can still be completed below `hi` by one more, larger prime.
fn extend_subsets(
    primes: &[u64],
    from: usize,
    remaining: usize,
    product: u64,
    hi: u64,
    chosen: &mut Vec<u64>,
    visit: &mut dyn FnMut(u64, &[u64]),
) {
    if remaining == 0 {
        visit(product, chosen);
        return;
    }
    for i in from..primes.len() {
        let p = primes[i];
        // product * p^(remaining + 1) is the smallest completion
        let mut min_total = product as u128;
        for _ in 0..=remaining {
            min_total = min_total.saturating_mul(p as u128);
        }
        if min_total > hi as u128 {
            break;
        }
        chosen.push(p);
        extend_subsets(primes, i + 1, remaining - 1, product * p, hi, chosen, visit);
        chosen.pop();
    }
}

/// Independent membership test for `M_F(x)`: factors `m` from scratch and
/// tests every condition without consulting the sieve's prime list.
pub fn recheck_membership(m: u64, f: &IntPoly, params: &DiversityParams) -> bool {
    let Ok(fac) = factor_integer(&BigInt::from(m), 1 << 20, 1 << 20) else {
        return false;
    };
    if !fac.is_complete() || fac.factors.iter().any(|(_, e)| *e != 1) {
        return false;
    }
    let primes: Vec<u64> = fac.factors.iter().map(|(p, _)| p.to_u64().unwrap()).collect();
    let Ok(disc) = poly_discriminant(f) else {
        return false;
    };
    let in_pf = primes.iter().all(|&p| {
        !(&disc % p).is_zero()
            && !ModPoly::from_int_poly(f, p).is_zero()
            && !roots_mod_p(f, p).unwrap_or_default().is_empty()
    });
    let (lo, hi) = params.window();
    in_pf
        && (lo..=hi).contains(&m)
        && primes.len() == params.k() + 1
        && primes.first().is_some_and(|&p| p >= params.y_min())
        && primes.last().is_some_and(|&p| p >= params.tail_min())
}

/// One row of the `|M_F(x)|` growth table.
#[derive(Clone, Debug, PartialEq)]
pub struct CardinalityRow {
    pub x: f64,
    pub count: usize,
    /// `log |M_F(x)| / log x`, `None` when the set is empty.
    pub exponent: Option<f64>,
    pub mode: ParamMode,
}

/// `|M_F(x)|` and `log |M_F(x)| / log x` for each `x`, with the overrides of
/// `template` held fixed.
pub fn report_mf_cardinality(
    sieve: &ChebotarevSieve,
    xs: &[f64],
    template: &DiversityParams,
) -> Result<Vec<CardinalityRow>> {
    xs.iter()
        .map(|&x| {
            let params = template.rescaled(x)?;
            let count = enumerate_mf(sieve, &params)?.entries.len();
            Ok(CardinalityRow {
                x,
                count,
                exponent: (count > 0).then(|| (count as f64).ln() / x.ln()),
                mode: params.mode(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn slow_primes(limit: u64) -> Vec<u64> {
        (2..=limit)
            .filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect()
    }

    #[test]
    fn prime_sieve_examples() {
        assert_eq!(prime_sieve(10), vec![2, 3, 5, 7]);
        assert_eq!(prime_sieve(2), vec![2]);
        let thirty = prime_sieve(30);
        assert_eq!(thirty.len(), 10);
        assert_eq!(*thirty.last().unwrap(), 29);
        assert!(prime_sieve(1).is_empty());
    }

    #[test]
    fn prime_sieve_across_segments() {
        for limit in [65535, 65536, 65537, 65539, 140_000] {
            assert_eq!(prime_sieve(limit), slow_primes(limit), "limit {limit}");
        }
        assert_eq!(prime_sieve(1_000_000).len(), 78498);
    }

    #[test]
    fn build_pf_examples() {
        let s = build_pf(&p(&[1, 0, 1]), 30).unwrap();
        assert_eq!(s.primes(), &[5, 13, 17, 29]);
        assert_eq!(s.delta_ratio(), (4, 10));

        let s = build_pf(&p(&[0, 1]), 30).unwrap();
        assert_eq!(s.primes(), prime_sieve(30).as_slice());
        assert_eq!(s.delta_hat(), 1.0);

        let s = build_pf(&p(&[1, 0, 1]), 100_000).unwrap();
        assert!((s.delta_hat() - 0.5).abs() <= 0.02, "{}", s.delta_hat());

        assert_eq!(build_pf(&p(&[1, -2, 1]), 30).unwrap_err(), Error::NotSeparable);
        assert!(build_pf(&p(&[3]), 30).is_err());
    }

    #[test]
    fn pf_excludes_discriminant_primes() {
        // T^2 - 3: disc 12, so 2 and 3 are out even though roots exist mod both
        let s = build_pf(&p(&[-3, 0, 1]), 50).unwrap();
        assert!(!s.contains(2) && !s.contains(3));
        assert!(s.contains(11) && s.contains(13));
    }

    #[test]
    fn density_floor_examples() {
        let r = check_density_floor(&build_pf(&p(&[1, 0, 1]), 100_000).unwrap(), 2).unwrap();
        assert!(r.pass);
        assert!((r.threshold - 0.45).abs() < 1e-12);

        let r = check_density_floor(&build_pf(&p(&[0, 1]), 10_000).unwrap(), 1).unwrap();
        assert!(r.pass);
        assert_eq!(r.delta_hat, 1.0);

        let r = check_density_floor(&build_pf(&p(&[-2, 0, 0, 1]), 100_000).unwrap(), 3).unwrap();
        assert!(r.pass);
        // a root exists for every p = 2 mod 3 and a third of p = 1 mod 3
        assert!((r.delta_hat - 2.0 / 3.0).abs() < 0.02, "{}", r.delta_hat);

        assert!(check_density_floor(&build_pf(&p(&[0, 1]), 100).unwrap(), 1).is_err());
    }

    #[test]
    fn pf_is_prefix_stable() {
        let f = p(&[-2, 0, 0, 1]);
        let small = build_pf(&f, 5_000).unwrap();
        let large = build_pf(&f, 20_000).unwrap();
        assert_eq!(small.primes(), &large.primes()[..small.primes().len()]);
        assert!(large.primes()[small.primes().len()..].iter().all(|&q| q > 5_000));
    }

    #[test]
    fn paper_mode_formulas() {
        let eps = default_epsilon(2);
        let params = DiversityParams::paper(1e6, eps, 0.5, 2).unwrap();
        assert_eq!(params.k(), 1);
        assert!(params.y() > 1e6f64.powf(0.99));
        assert!((params.kappa() - 1e6f64.ln().ln()).abs() < 1e-12);
        assert_eq!(params.mode(), ParamMode::Paper);
        params.validate().unwrap();

        let mut tampered = params.clone();
        tampered.k = 3;
        assert!(tampered.validate().is_err());

        let sieve = build_pf(&p(&[1, 0, 1]), 1_000_000).unwrap();
        let out = enumerate_mf(&sieve, &params).unwrap();
        assert!(out.entries.is_empty());
        assert!(out.warning.unwrap().contains("paper mode"));
    }

    #[test]
    fn parameter_validation() {
        assert!(DiversityParams::paper(1e4, 0.0, 0.5, 1).is_err());
        assert!(DiversityParams::paper(1e4, 0.6, 0.5, 1).is_err());
        assert!(DiversityParams::paper(1e4, 0.5, 0.0, 1).is_err());
        assert!(DiversityParams::paper(5.0, 0.5, 0.5, 1).is_err());
        let bad = DiversityParams::paper(1e4, 0.5, 0.5, 1).unwrap().with_window(10, 5);
        assert!(bad.validate().is_err());
    }

    fn override_params(lo: u64, hi: u64, k: usize, y: f64, tail: f64) -> DiversityParams {
        DiversityParams::paper(1e4, 0.5, 0.5, 2)
            .unwrap()
            .with_window(lo, hi)
            .with_k(k)
            .with_y(y)
            .with_tail(tail)
    }

    #[test]
    fn override_example() {
        let sieve = build_pf(&p(&[1, 0, 1]), 30).unwrap();
        let params = override_params(50, 100, 1, 5.0, 0.0);
        let out = enumerate_mf(&sieve, &params).unwrap();
        let ms: Vec<u64> = out.entries.iter().map(|e| e.m).collect();
        assert_eq!(ms, vec![65, 85]);
        assert_eq!(out.entries[0].factorization_string(), "5*13");
        assert_eq!(out.entries[1].cofactor(), 5);
        assert_eq!(out.entries[1].large_prime(), 17);
        assert!(out.warning.is_none());
        assert_eq!(params.mode(), ParamMode::Override);
    }

    #[test]
    fn single_prime_case() {
        let sieve = build_pf(&p(&[1, 0, 1]), 1000).unwrap();
        let params = override_params(100, 400, 0, 2.0, 0.5); // x^0.5 = 100
        let ms: Vec<u64> = enumerate_mf(&sieve, &params).unwrap().entries.iter().map(|e| e.m).collect();
        let expect: Vec<u64> = sieve.primes().iter().copied().filter(|&q| (100..=400).contains(&q)).collect();
        assert_eq!(ms, expect);
    }

    #[test]
    fn undersized_sieve_is_rejected() {
        let sieve = build_pf(&p(&[1, 0, 1]), 30).unwrap();
        let params = override_params(50, 1000, 1, 5.0, 0.0);
        assert!(matches!(enumerate_mf(&sieve, &params), Err(Error::Precondition(_))));
    }

    /// Scan every integer of the window and test membership by trial
    /// division.
    fn brute_force_mf(f: &IntPoly, params: &DiversityParams) -> Vec<u64> {
        let disc = poly_discriminant(f).unwrap();
        let (lo, hi) = params.window();
        (lo.max(2)..=hi)
            .filter(|&m| {
                let mut r = m;
                let mut ps = Vec::new();
                let mut d = 2;
                while d * d <= r {
                    if r % d == 0 {
                        r /= d;
                        if r % d == 0 {
                            return false;
                        }
                        ps.push(d);
                    }
                    d += 1;
                }
                if r > 1 {
                    ps.push(r);
                }
                ps.len() == params.k() + 1
                    && ps[0] >= params.y_min()
                    && *ps.last().unwrap() >= params.tail_min()
                    && ps.iter().all(|&q| {
                        !(&disc % q).is_zero() && (0..q).any(|t| f.eval_mod(t, q) == 0)
                    })
            })
            .collect()
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for f in [p(&[0, 1]), p(&[1, 0, 1]), p(&[0, 2, -3, 1])] {
            let sieve = build_pf(&f, 10_000).unwrap();
            for (k, y, tail) in [(1, 2.0, 0.5), (1, 3.0, 0.0), (2, 3.0, 0.5), (0, 2.0, 0.9), (2, 2.0, 0.0)] {
                let params = DiversityParams::paper(1e4, 0.5, 0.5, f.deg())
                    .unwrap()
                    .with_k(k)
                    .with_y(y)
                    .with_tail(tail);
                let got: Vec<u64> = enumerate_mf(&sieve, &params).unwrap().entries.iter().map(|e| e.m).collect();
                assert_eq!(got, brute_force_mf(&f, &params), "F = {f}, k = {k}, y = {y}, tail = {tail}");
                for m in &got {
                    assert!(recheck_membership(*m, &f, &params));
                }
            }
        }
    }

    #[test]
    fn cardinality_table() {
        let f = p(&[0, 1]);
        let sieve = build_pf(&f, 1_000_000).unwrap();
        let template = DiversityParams::paper(1e4, 0.5, 1.0, 1).unwrap().with_k(1).with_y(2.0).with_tail(0.5);
        let rows = report_mf_cardinality(&sieve, &[1e4, 1e5, 1e6], &template).unwrap();
        assert!(rows.iter().all(|r| r.mode == ParamMode::Override && r.count > 0));
        assert!(rows.windows(2).all(|w| w[0].count <= w[1].count));

        // double-loop brute force at x = 10^4: pairs q < P, P >= 100
        let params = template.rescaled(1e4).unwrap();
        let (lo, hi) = params.window();
        let primes = prime_sieve(hi);
        let mut brute = 0;
        for &q in &primes {
            for &big in &primes {
                if q < big && big >= 100 && (lo..=hi).contains(&(q * big)) {
                    brute += 1;
                }
            }
        }
        assert_eq!(rows[0].count, brute);
    }

    #[test]
    fn empty_pf_range_gives_zero_counts() {
        let sieve = build_pf(&p(&[1, 0, 1]), 1_000).unwrap();
        let template = DiversityParams::paper(1e3, 0.5, 0.5, 2).unwrap().with_k(1).with_y(900.0).with_tail(0.0);
        let rows = report_mf_cardinality(&sieve, &[1e3, 2e3], &template).unwrap();
        assert!(rows.iter().all(|r| r.count == 0 && r.exponent.is_none()));
    }

    proptest! {
        #[test]
        fn delta_hat_of_linear_t_is_one(limit in 2u64..20_000) {
            let s = build_pf(&p(&[0, 1]), limit).unwrap();
            prop_assert_eq!(s.delta_hat(), 1.0);
        }
    }
}
