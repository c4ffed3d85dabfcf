//! The exact-divisor shift and the witnesses `n_m`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sieve::{DiversityParams, MfEntry, ParamMode};

use super::roots::{crt_combine, crt_root, roots_per_prime};
use super::{Family, Squarefree};

/// `m || v`: `m | v` and `gcd(m, v / m) = 1`.
pub fn exact_divides(m: u64, v: &BigInt) -> bool {
    let mb = BigInt::from(m);
    let (q, r) = v.div_rem(&mb);
    r.is_zero() && q.mod_floor(&mb).gcd(&mb).is_one()
}

impl Family {
    /// Smallest `l` in `0..=omega(m)` with `m || F(n + l m)`.
    pub fn exact_divisor_shift(&self, m: &Squarefree, n: &BigInt) -> Result<usize> {
        let f = self.poly();
        if !f.eval(n).mod_floor(&BigInt::from(m.value())).is_zero() {
            return Err(Error::Precondition(format!("{m} does not divide F({n})")));
        }
        if let Some(&p) = m.primes().iter().find(|&&p| self.divides_discriminant(p)) {
            return Err(Error::Precondition(format!("{p} divides both {m} and the discriminant")));
        }
        let omega = m.omega();
        if m.p_min().is_some_and(|p| p as usize <= omega) {
            return Err(Error::Precondition(format!(
                "p_min({m}) = {} does not exceed omega = {omega}",
                m.p_min().unwrap()
            )));
        }
        let step = BigInt::from(m.value());
        let mut t = n.clone();
        for l in 0..=omega {
            if exact_divides(m.value(), &f.eval(&t)) {
                return Ok(l);
            }
            t += &step;
        }
        Err(Error::LemmaViolation {
            m: m.value(),
            n: n.clone(),
        })
    }

    /// The canonical witness: minimal CRT root (`m` in place of 0), then the
    /// minimal exact-divisor shift.
    pub fn primitive_witness(&self, m: &Squarefree) -> Result<WitnessRecord> {
        let root = crt_root(self.poly(), m)?;
        self.witness_from(m, root.n, root.exhaustive)
    }

    /// As [`Family::primitive_witness`] but starting from a uniformly random
    /// root of `F` modulo `m`.
    pub fn random_witness(&self, m: &Squarefree, rng: &mut impl Rng) -> Result<WitnessRecord> {
        let table = roots_per_prime(self.poly(), m)?;
        let mut residues = Vec::with_capacity(table.len());
        for (roots, &p) in table.iter().zip(m.primes()) {
            if roots.is_empty() {
                return Err(Error::NoRoot { p });
            }
            residues.push(roots[rng.gen_range(0..roots.len())]);
        }
        self.witness_from(m, crt_combine(m, &residues), true)
    }

    fn witness_from(&self, m: &Squarefree, root: u64, exhaustive: bool) -> Result<WitnessRecord> {
        let start = if root == 0 { m.value() } else { root };
        let shift_l = self.exact_divisor_shift(m, &BigInt::from(start))?;
        let n_m = (start as u128 + shift_l as u128 * m.value() as u128)
            .try_into()
            .map_err(|_| Error::Domain(format!("witness for {m} overflows 64 bits")))?;
        let record = WitnessRecord {
            m: m.value(),
            primes: m.primes().to_vec(),
            n_m,
            shift_l,
            greedy: false,
            crt_exhaustive: exhaustive,
        };
        if n_m as u128 > record.bound() {
            return Err(Error::Invariant(format!(
                "n_m = {n_m} exceeds m(omega(m) + 1) = {} for m = {m}",
                record.bound()
            )));
        }
        Ok(record)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessRecord {
    pub m: u64,
    /// Prime factors of `m`, ascending.
    pub primes: Vec<u64>,
    pub n_m: u64,
    pub shift_l: usize,
    /// Set by [`classify_greedy`].
    pub greedy: bool,
    pub crt_exhaustive: bool,
}

impl WitnessRecord {
    pub fn omega(&self) -> usize {
        self.primes.len()
    }

    /// `m (omega(m) + 1)`
    pub fn bound(&self) -> u128 {
        self.m as u128 * (self.omega() as u128 + 1)
    }

    pub fn factorization_string(&self) -> String {
        self.primes.iter().map(u64::to_string).collect::<Vec<_>>().join("*")
    }
}

/// Re-derives the witness conditions from scratch with big integers.
pub fn recheck_witness(family: &Family, rec: &WitnessRecord) -> bool {
    let product: u128 = rec.primes.iter().map(|&p| p as u128).product();
    let v = family.poly().eval(&BigInt::from(rec.n_m));
    product == rec.m as u128 && rec.n_m >= 1 && (rec.n_m as u128) <= rec.bound() && exact_divides(rec.m, &v)
}

/// How `n_m` is picked among the roots of `F` modulo `m`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WitnessChoice {
    #[default]
    Canonical,
    /// A random root per element, reproducible from the seed.
    Random { seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessBatch {
    pub records: Vec<WitnessRecord>,
    /// Elements whose smallest prime does not exceed `omega(m)`, so the
    /// shift is not guaranteed; they get no witness.
    pub skipped: Vec<u64>,
    /// Witnesses with `n_m > x`; only possible with overridden parameters.
    pub beyond_x: usize,
}

/// Witnesses for every element of `M_F(x)`, sharded over `workers` threads.
/// Output order and content do not depend on `workers`.
pub fn build_witnesses(
    family: &Family,
    entries: &[MfEntry],
    params: &DiversityParams,
    choice: WitnessChoice,
    workers: usize,
) -> Result<WitnessBatch> {
    let workers = workers.max(1);
    let chunk = entries.len().div_ceil(workers).max(1);
    let results: Vec<Result<Vec<Option<WitnessRecord>>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = entries
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|e| witness_for_entry(family, e, choice))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("witness worker panicked")).collect()
    });

    let x = params.x();
    let mut batch = WitnessBatch {
        records: Vec::with_capacity(entries.len()),
        skipped: Vec::new(),
        beyond_x: 0,
    };
    for (entry, rec) in entries.iter().zip(results.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten()) {
        let Some(rec) = rec else {
            batch.skipped.push(entry.m);
            continue;
        };
        let elex = rec.m as u128 * (params.k() as u128 + 2);
        if rec.n_m as u128 > elex {
            return Err(Error::Invariant(format!("n_m = {} exceeds m(k + 2) = {elex}", rec.n_m)));
        }
        if rec.n_m as f64 > x {
            if params.mode() == ParamMode::Paper {
                return Err(Error::Invariant(format!("n_m = {} exceeds x = {x} in paper mode", rec.n_m)));
            }
            batch.beyond_x += 1;
        }
        batch.records.push(rec);
    }
    Ok(batch)
}

fn witness_for_entry(family: &Family, entry: &MfEntry, choice: WitnessChoice) -> Result<Option<WitnessRecord>> {
    let m = Squarefree::from(entry);
    let out = match choice {
        WitnessChoice::Canonical => family.primitive_witness(&m),
        WitnessChoice::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ entry.m.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            family.random_witness(&m, &mut rng)
        }
    };
    match out {
        Ok(rec) => Ok(Some(rec)),
        Err(Error::Precondition(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GreedyStats {
    pub greedy: usize,
    pub generous: usize,
    pub distinct_n: usize,
    pub mf_size: usize,
    /// `|{n_m}| * 12d / |M_F(x)|`; at least 1 when the lower bound holds.
    pub ratio: Option<f64>,
}

impl GreedyStats {
    pub fn half_greedy(&self) -> bool {
        2 * self.greedy >= self.greedy + self.generous
    }
}

/// Marks each record greedy, or generous when at least `6d` other records
/// share its `n_m`.
pub fn classify_greedy(records: &mut [WitnessRecord], d: usize, mf_size: usize) -> GreedyStats {
    let mut sharing: HashMap<u64, usize> = HashMap::new();
    for r in records.iter() {
        *sharing.entry(r.n_m).or_default() += 1;
    }
    let mut greedy = 0;
    for r in records.iter_mut() {
        r.greedy = sharing[&r.n_m] - 1 < 6 * d;
        greedy += r.greedy as usize;
    }
    GreedyStats {
        greedy,
        generous: records.len() - greedy,
        distinct_n: sharing.len(),
        mf_size,
        ratio: (mf_size > 0).then(|| (sharing.len() * 12 * d) as f64 / mf_size as f64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::IntPoly;
    use crate::sieve::build_pf;

    fn fam(c: &[i64]) -> Family {
        Family::new(IntPoly::from_i64s(c)).unwrap()
    }

    fn sf(m: u64) -> Squarefree {
        Squarefree::factor(m).unwrap()
    }

    #[test]
    fn exact_divides_examples() {
        assert!(exact_divides(65, &BigInt::from(65)));
        assert!(!exact_divides(65, &BigInt::from(3250)));
        assert!(exact_divides(65, &BigInt::from(14885)));
        assert!(exact_divides(1, &BigInt::from(0)));
        assert!(!exact_divides(6, &BigInt::from(0)));
        assert!(exact_divides(6, &BigInt::from(-6)));
    }

    #[test]
    fn shift_examples() {
        let f = fam(&[1, 0, 1]);
        assert_eq!(f.exact_divisor_shift(&sf(65), &BigInt::from(8)).unwrap(), 0);
        assert_eq!(f.exact_divisor_shift(&sf(65), &BigInt::from(57)).unwrap(), 1);
        let t = fam(&[0, 1]);
        assert_eq!(t.exact_divisor_shift(&sf(15), &BigInt::from(15)).unwrap(), 0);
    }

    #[test]
    fn shift_preconditions() {
        let t = fam(&[0, 1]);
        // p_min(6) = 2 is not larger than omega(6) = 2
        assert!(matches!(t.exact_divisor_shift(&sf(6), &BigInt::from(6)), Err(Error::Precondition(_))));
        let f = fam(&[1, 0, 1]);
        assert!(matches!(f.exact_divisor_shift(&sf(65), &BigInt::from(9)), Err(Error::Precondition(_))));
        // disc(T^2 + 1) = -4
        assert!(matches!(f.exact_divisor_shift(&sf(2), &BigInt::from(1)), Err(Error::Precondition(_))));
    }

    #[test]
    fn witness_examples() {
        let f = fam(&[1, 0, 1]);
        let w = f.primitive_witness(&sf(65)).unwrap();
        assert_eq!((w.n_m, w.shift_l, w.bound()), (8, 0, 195));
        assert_eq!(f.primitive_witness(&sf(5)).unwrap().n_m, 2);
        assert_eq!(f.primitive_witness(&sf(85)).unwrap().n_m, 13);
        let t = fam(&[0, 1]);
        assert_eq!(t.primitive_witness(&sf(5)).unwrap().n_m, 5);
        for rec in [w, t.primitive_witness(&sf(5 * 7 * 11)).unwrap()] {
            assert!(recheck_witness(if rec.m == 65 { &f } else { &t }, &rec));
        }
    }

    #[test]
    fn witness_needs_a_root() {
        assert_eq!(fam(&[1, 0, 1]).primitive_witness(&sf(7)).unwrap_err(), Error::NoRoot { p: 7 });
    }

    #[test]
    fn random_witnesses_recheck() {
        let f = fam(&[-2, 0, 0, 1]);
        let sieve = build_pf(f.poly(), 2000).unwrap();
        let ps: Vec<u64> = sieve.primes().iter().copied().filter(|&p| p > 5).take(12).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for w in ps.windows(3) {
            let m = Squarefree::from_primes(w.to_vec()).unwrap();
            let rec = f.random_witness(&m, &mut rng).unwrap();
            assert!(recheck_witness(&f, &rec), "{rec:?}");
        }
    }

    fn override_example() -> (Family, Vec<MfEntry>, DiversityParams) {
        let f = fam(&[1, 0, 1]);
        let sieve = build_pf(f.poly(), 30).unwrap();
        let params = DiversityParams::paper(200.0, 0.5, 0.5, 2)
            .unwrap()
            .with_window(50, 100)
            .with_k(1)
            .with_y(5.0)
            .with_tail(0.0);
        let entries = crate::sieve::enumerate_mf(&sieve, &params).unwrap().entries;
        (f, entries, params)
    }

    #[test]
    fn greedy_on_override_example() {
        let (f, entries, params) = override_example();
        let mut batch = build_witnesses(&f, &entries, &params, WitnessChoice::Canonical, 1).unwrap();
        let ns: Vec<u64> = batch.records.iter().map(|r| r.n_m).collect();
        assert_eq!(ns, vec![8, 13]);
        let stats = classify_greedy(&mut batch.records, 2, entries.len());
        assert_eq!((stats.greedy, stats.generous, stats.distinct_n), (2, 0, 2));
        assert!(batch.records.iter().all(|r| r.greedy));
    }

    #[test]
    fn batches_do_not_depend_on_workers() {
        let f = fam(&[1, 0, 1]);
        let sieve = build_pf(f.poly(), 20_000).unwrap();
        let params = DiversityParams::paper(2e4, 0.5, 0.5, 2).unwrap().with_k(1).with_y(5.0).with_tail(0.5);
        let entries = crate::sieve::enumerate_mf(&sieve, &params).unwrap().entries;
        assert!(entries.len() > 50);
        for choice in [WitnessChoice::Canonical, WitnessChoice::Random { seed: 3 }] {
            let one = build_witnesses(&f, &entries, &params, choice, 1).unwrap();
            let four = build_witnesses(&f, &entries, &params, choice, 4).unwrap();
            assert_eq!(one, four);
            assert!(one.records.iter().all(|r| recheck_witness(&f, r)));
        }
    }

    #[test]
    fn greedy_thresholds() {
        let rec = |m: u64, n_m: u64| WitnessRecord {
            m,
            primes: vec![m],
            n_m,
            shift_l: 0,
            greedy: false,
            crt_exhaustive: true,
        };
        let mut distinct: Vec<_> = (0..10).map(|i| rec(101 + i, i + 1)).collect();
        let stats = classify_greedy(&mut distinct, 1, 10);
        assert_eq!(stats.greedy, 10);
        assert_eq!(stats.ratio, Some(12.0));

        let mut seven: Vec<_> = (0..7).map(|i| rec(101 + i, 5)).collect();
        let stats = classify_greedy(&mut seven, 1, 7);
        assert_eq!((stats.greedy, stats.generous), (0, 7));
        let mut six: Vec<_> = (0..6).map(|i| rec(101 + i, 5)).collect();
        assert_eq!(classify_greedy(&mut six, 1, 6).generous, 0);
    }
}
