//! The diversity census over fibers `1..=N`.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::algebra::{critical_polynomial, discriminant_in_u, CurveCover, IntPoly};
use crate::error::{Error, Result};
use crate::factorization::FactorBudget;
use crate::sieve::build_pf;

use super::{
    definitely_distinct, eta_exponent, fiber_poly, fingerprint, poly_irreducibility, EtaValues, FieldFingerprint,
    Irreducibility,
};

#[derive(Clone, Debug, PartialEq)]
pub struct CensusConfig {
    pub budget: FactorBudget,
    pub workers: usize,
    /// Primes up to here estimate the density of `P_F`.
    pub sieve_limit: u64,
    /// Replaces the measured density in `eta`.
    pub delta: Option<f64>,
    /// Replaces `deg F` in `eta`.
    pub d: Option<usize>,
    /// Genus of the cover, enabling the fallback exponent.
    pub genus: Option<usize>,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            budget: FactorBudget::default(),
            workers: 1,
            sieve_limit: 100_000,
            delta: None,
            d: None,
            genus: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub n: u64,
    pub fiber_degree: usize,
    pub irreducible: Irreducibility,
    /// Present for irreducible fibers.
    pub fingerprint: Option<FieldFingerprint>,
    /// The fingerprint is definitely distinct from every earlier new field.
    pub new_field: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiversityCensus {
    pub n_max: u64,
    pub rows: Vec<CensusRow>,
    pub distinct_lower_bound: usize,
    pub reducible_count: usize,
    pub unknown_count: usize,
    /// Fibers left out, with the reason.
    pub skipped: Vec<(u64, String)>,
    pub critical_poly: IntPoly,
    pub d: usize,
    pub delta: f64,
    pub eta: EtaValues,
}

impl DiversityCensus {
    /// `N / log N`
    pub fn n_over_log_n(&self) -> f64 {
        let n = self.n_max as f64;
        n / n.ln()
    }

    /// `N / (log N)^(1 - eta)`
    pub fn bound_value(&self) -> f64 {
        let n = self.n_max as f64;
        n / n.ln().powf(1.0 - self.eta.eta)
    }
}

enum Outcome {
    Row(CensusRow),
    Skipped(String),
}

fn examine(cover: &CurveCover, n: u64, budget: FactorBudget) -> Outcome {
    let f = match fiber_poly(cover, &BigInt::from(n)) {
        Ok(f) => f,
        Err(e) => return Outcome::Skipped(e.to_string()),
    };
    let irreducible = poly_irreducibility(&f);
    let fingerprint = if irreducible == Irreducibility::Irreducible {
        match fingerprint(&f, budget) {
            Ok(fp) => Some(fp),
            Err(e) => return Outcome::Skipped(e.to_string()),
        }
    } else {
        None
    };
    Outcome::Row(CensusRow {
        n,
        fiber_degree: f.deg(),
        irreducible,
        fingerprint,
        new_field: false,
    })
}

/// Examines every fiber `1..=n_max` and counts fields that are provably
/// pairwise distinct. Fibers are split across workers; the count is taken
/// in ascending `n` afterwards, so the census at `N` is a prefix of any
/// larger census.
pub fn run_census(cover: &CurveCover, n_max: u64, config: &CensusConfig) -> Result<DiversityCensus> {
    if n_max < 10 {
        return Err(Error::Precondition(format!("N = {n_max} is below 10")));
    }
    let critical_poly = critical_polynomial(cover)?;
    let d = config.d.unwrap_or(critical_poly.deg());
    let delta = match config.delta {
        Some(delta) => delta,
        None => build_pf(&critical_poly, config.sieve_limit)?.delta_hat(),
    };
    let eta = eta_exponent(d, delta, config.genus.map(|g| g + cover.nu()))?;

    let workers = config.workers.max(1) as u64;
    let span = n_max.div_ceil(workers);
    let budget = config.budget;
    let outcomes: Vec<Vec<(u64, Outcome)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|i| (1 + i * span, ((i + 1) * span).min(n_max)))
            .filter(|(a, b)| a <= b)
            .map(|(a, b)| scope.spawn(move || (a..=b).map(|n| (n, examine(cover, n, budget))).collect()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("census worker panicked")).collect()
    });

    let mut census = DiversityCensus {
        n_max,
        rows: Vec::with_capacity(n_max as usize),
        distinct_lower_bound: 0,
        reducible_count: 0,
        unknown_count: 0,
        skipped: Vec::new(),
        critical_poly,
        d,
        delta,
        eta,
    };
    let mut complete: HashSet<(bool, Vec<BigUint>)> = HashSet::new();
    let mut partial: Vec<FieldFingerprint> = Vec::new();
    let mut all: Vec<FieldFingerprint> = Vec::new();
    for (n, outcome) in outcomes.into_iter().flatten() {
        let mut row = match outcome {
            Outcome::Row(row) => row,
            Outcome::Skipped(reason) => {
                census.skipped.push((n, reason));
                continue;
            }
        };
        match row.irreducible {
            Irreducibility::Reducible => census.reducible_count += 1,
            Irreducibility::Unknown => census.unknown_count += 1,
            Irreducibility::Irreducible => {}
        }
        if let Some(fp) = &row.fingerprint {
            row.new_field = if fp.is_complete() {
                !complete.contains(&(fp.negative, fp.odd_primes.clone()))
                    && partial.iter().all(|r| definitely_distinct(fp, r))
            } else {
                all.iter().all(|r| definitely_distinct(fp, r))
            };
            if row.new_field {
                census.distinct_lower_bound += 1;
                if fp.is_complete() {
                    complete.insert((fp.negative, fp.odd_primes.clone()));
                } else {
                    partial.push(fp.clone());
                }
                all.push(fp.clone());
            }
        }
        census.rows.push(row);
    }
    Ok(census)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropertyAReport {
    pub checked: usize,
    /// `(n, p)` with `p` in the fingerprint of fiber `n` but not dividing
    /// `2 c F(n) lc_u(g)(n)`, `c` the content of `disc_u(g)`.
    pub exceptions: Vec<(u64, BigUint)>,
}

/// Checks that the fingerprint primes of each fiber divide
/// `2 c F(n) lc_u(g)(n)`.
pub fn property_a_spot_check(cover: &CurveCover, census: &DiversityCensus) -> PropertyAReport {
    let content = discriminant_in_u(cover).content();
    let lc = cover.lc_u();
    let mut report = PropertyAReport::default();
    for row in &census.rows {
        let Some(fp) = &row.fingerprint else {
            continue;
        };
        report.checked += 1;
        let n = BigInt::from(row.n);
        let modulus = BigInt::from(2) * &content * census.critical_poly.eval(&n) * lc.eval(&n);
        for p in &fp.odd_primes {
            if !(&modulus % BigInt::from(p.clone())).is_zero() {
                report.exceptions.push((row.n, p.clone()));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cover(text: &str) -> CurveCover {
        CurveCover::parse(text).unwrap()
    }

    /// Number of squarefree integers in `1..=n`, by sieving out multiples of
    /// squares.
    fn squarefree_count(n: usize) -> usize {
        let mut sf = vec![true; n + 1];
        let mut k = 2;
        while k * k <= n {
            for j in (k * k..=n).step_by(k * k) {
                sf[j] = false;
            }
            k += 1;
        }
        sf[1..].iter().filter(|&&b| b).count()
    }

    #[test]
    fn quadratic_census_examples() {
        let c = cover("u^2 - t");
        let census = run_census(&c, 100, &CensusConfig::default()).unwrap();
        assert_eq!(census.reducible_count, 10);
        assert_eq!(census.distinct_lower_bound, squarefree_count(100) - 1);
        assert_eq!(census.distinct_lower_bound, 60);
        assert_eq!(census.d, 1);
        assert_eq!(census.delta, 1.0);
        let n = 100f64;
        assert!((census.bound_value() - n / n.ln().powf(1.0 - census.eta.eta)).abs() < 1e-9);
    }

    #[test]
    fn census_minimum_size() {
        let c = cover("u^2 - t");
        assert!(matches!(run_census(&c, 5, &CensusConfig::default()), Err(Error::Precondition(_))));
        let census = run_census(&c, 10, &CensusConfig::default()).unwrap();
        assert!(census.distinct_lower_bound >= 1);
        assert!(census.bound_value() < census.n_over_log_n() * 10f64.ln().powf(census.eta.eta) + 1e-9);
    }

    #[test]
    fn census_is_worker_independent_and_prefix_stable() {
        let c = cover("u^3 - t*u - 1");
        let one = run_census(&c, 300, &CensusConfig::default()).unwrap();
        let four = run_census(&c, 300, &CensusConfig { workers: 4, ..Default::default() }).unwrap();
        assert_eq!(one, four);
        let small = run_census(&c, 120, &CensusConfig::default()).unwrap();
        assert_eq!(small.rows[..], one.rows[..small.rows.len()]);
    }

    #[test]
    fn quadratic_exactness() {
        // fingerprints of u^2 - h(n) coincide iff the squarefree kernels of h(n) do
        // h(n) = (n - 10)(n - 20) is negative for 10 < n < 20
        let c = cover("u^2 - t^2 + 30*t - 200");
        let census = run_census(&c, 400, &CensusConfig::default()).unwrap();
        let kernel = |v: i64| {
            let mut r = v.abs();
            let mut out = v.signum();
            let mut p = 2;
            while p * p <= r {
                while r % (p * p) == 0 {
                    r /= p * p;
                }
                if r % p == 0 {
                    out *= p;
                    r /= p;
                }
                p += 1;
            }
            out * r
        };
        let rows: Vec<_> = census.rows.iter().filter(|r| r.fingerprint.is_some()).collect();
        assert!(rows.len() > 300);
        for a in &rows {
            for b in &rows {
                let h = |n: u64| (n as i64 - 10) * (n as i64 - 20);
                let same_fp = a.fingerprint == b.fingerprint;
                assert_eq!(same_fp, kernel(h(a.n)) == kernel(h(b.n)), "n = {}, {}", a.n, b.n);
            }
        }
    }

    #[test]
    fn degenerate_fibers_are_skipped() {
        let c = cover("(t - 3)*u^2 + u - t");
        let census = run_census(&c, 20, &CensusConfig::default()).unwrap();
        assert_eq!(census.skipped.len(), 1);
        assert_eq!(census.skipped[0].0, 3);
        assert_eq!(census.rows.len(), 19);
    }

    #[test]
    fn property_a_on_square_roots() {
        let c = cover("u^2 - t");
        let census = run_census(&c, 2000, &CensusConfig::default()).unwrap();
        let report = property_a_spot_check(&c, &census);
        assert_eq!(report.checked, 2000 - 44);
        assert!(report.exceptions.is_empty());
    }
}
