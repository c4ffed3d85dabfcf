//! The `omega_J` buckets of `F(n)` and the scan for `n` with many divisors
//! in `M_F(x)`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::IntPoly;
use crate::error::{Error, Result};
use crate::factorization::FactorBudget;
use crate::sieve::{DiversityParams, MfEntry};

use super::roots::all_crt_roots;
use super::Squarefree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OmegaClass {
    Enormous,
    Large,
    Reasonable,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OmegaClassification {
    pub n: u64,
    /// Distinct prime factors of `F(n)` in `[y, x]`.
    pub omega_j: Option<usize>,
    pub class: OmegaClass,
}

/// `(3d (log log x)^2, 10^5 d^2 log log x)`
pub fn omega_thresholds(params: &DiversityParams) -> (f64, f64) {
    let ll = params.x().ln().ln();
    let d = params.d() as f64;
    (3.0 * d * ll * ll, 1e5 * d * d * ll)
}

/// Buckets `n` by `omega_J(F(n))`. Reasonable takes precedence over
/// enormous, which takes precedence over large.
pub fn classify_omega(f: &IntPoly, n: u64, params: &DiversityParams, budget: FactorBudget) -> Result<OmegaClassification> {
    let v = f.eval(&BigInt::from(n));
    let indeterminate = OmegaClassification {
        n,
        omega_j: None,
        class: OmegaClass::Indeterminate,
    };
    if v.is_zero() {
        return Ok(indeterminate);
    }
    let fac = budget.factor(&v)?;
    if !fac.is_complete() {
        return Ok(indeterminate);
    }
    let (y, x) = (params.y(), params.x());
    let omega_j = fac
        .factors
        .iter()
        .filter(|(p, _)| {
            let p = p.to_f64().unwrap_or(f64::INFINITY);
            p >= y && p <= x
        })
        .count();
    let (enormous, reasonable) = omega_thresholds(params);
    let w = omega_j as f64;
    let class = if w <= reasonable {
        OmegaClass::Reasonable
    } else if w >= enormous {
        OmegaClass::Enormous
    } else {
        OmegaClass::Large
    };
    Ok(OmegaClassification {
        n,
        omega_j: Some(omega_j),
        class,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OmegaHistogram {
    pub enormous: usize,
    pub large: usize,
    pub reasonable: usize,
    pub indeterminate: usize,
}

pub fn omega_histogram(
    f: &IntPoly,
    ns: impl IntoIterator<Item = u64>,
    params: &DiversityParams,
    budget: FactorBudget,
) -> Result<OmegaHistogram> {
    let mut h = OmegaHistogram::default();
    for n in ns {
        match classify_omega(f, n, params, budget)?.class {
            OmegaClass::Enormous => h.enormous += 1,
            OmegaClass::Large => h.large += 1,
            OmegaClass::Reasonable => h.reasonable += 1,
            OmegaClass::Indeterminate => h.indeterminate += 1,
        }
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeavyScan {
    pub x: u64,
    pub threshold: usize,
    /// `(n, number of m in M_F(x) dividing F(n))`, ascending in `n`.
    pub heavy: Vec<(u64, u32)>,
    pub density: f64,
    /// `x (log x)^(-2 + 30 eps log 2d)`, for comparison only.
    pub bound: f64,
}

/// All `n <= x` with more than `6d` divisors in `M_F(x)`.
pub fn heavy_n_scan(f: &IntPoly, mf: &[MfEntry], params: &DiversityParams, workers: usize) -> Result<HeavyScan> {
    heavy_n_scan_with_threshold(f, mf, params, 6 * params.d(), workers)
}

/// All `n <= x` with more than `threshold` divisors among `mf`. Each `m`
/// contributes the `rho_F(m)` progressions of its roots; the range of `n` is
/// split across workers.
pub fn heavy_n_scan_with_threshold(
    f: &IntPoly,
    mf: &[MfEntry],
    params: &DiversityParams,
    threshold: usize,
    workers: usize,
) -> Result<HeavyScan> {
    let x = params.x().floor() as u64;
    if x > u32::MAX as u64 {
        return Err(Error::Params(format!("x = {x} is too large for a dense scan")));
    }
    let mut progressions: Vec<(u64, u64)> = Vec::new();
    for e in mf {
        for r in all_crt_roots(f, &Squarefree::from(e))? {
            progressions.push((e.m, if r == 0 { e.m } else { r }));
        }
    }

    let workers = workers.max(1) as u64;
    let span = x.div_ceil(workers).max(1);
    let shards: Vec<(u64, u64)> = (0..workers)
        .map(|i| (1 + i * span, ((i + 1) * span).min(x)))
        .filter(|(a, b)| a <= b)
        .collect();
    let parts: Vec<Vec<(u64, u32)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = shards
            .iter()
            .map(|&(a, b)| {
                let progressions = &progressions;
                scope.spawn(move || {
                    let mut counts = vec![0u32; (b - a + 1) as usize];
                    for &(m, r) in progressions {
                        let mut n = if r >= a { r } else { a + (r + m - a % m) % m };
                        while n <= b {
                            counts[(n - a) as usize] += 1;
                            n += m;
                        }
                    }
                    counts
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c as usize > threshold)
                        .map(|(i, &c)| (a + i as u64, c))
                        .collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
    });
    let heavy: Vec<(u64, u32)> = parts.into_iter().flatten().collect();

    let lx = params.x().ln();
    let d = params.d() as f64;
    Ok(HeavyScan {
        x,
        threshold,
        density: heavy.len() as f64 / x.max(1) as f64,
        bound: params.x() * lx.powf(-2.0 + 30.0 * params.epsilon() * (2.0 * d).ln()),
        heavy,
    })
}
