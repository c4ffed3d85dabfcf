//! The five subcommands.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use divlab::algebra::{critical_polynomial, discriminant_in_u, CurveCover, IntPoly};
use divlab::dz::{
    build_witnesses, classify_greedy, find_cliques, heavy_n_scan, lemma_suite, omega_histogram, property_c_sweep,
    recheck_witness, rho_suite, verify_property_d, verify_property_e, Family, Squarefree, WitnessChoice,
};
use divlab::factorization::factor_integer;
use divlab::fields::{property_a_spot_check, run_census, CensusConfig};
use divlab::sieve::{build_pf, check_density_floor, default_epsilon, enumerate_mf, ChebotarevSieve, DiversityParams};
use divlab::Error;

use crate::config::{Choice, RunConfig};
use crate::output;
use crate::CliError;

/// Largest `x` for which the witness command runs the dense heavy-`n` scan.
const HEAVY_SCAN_MAX_X: f64 = 1e7;

struct Setup {
    cover: CurveCover,
    family: Family,
    sieve: ChebotarevSieve,
}

fn setup(config: &RunConfig) -> Result<Setup, CliError> {
    let cover = CurveCover::parse(&config.cover)?;
    let f = critical_polynomial(&cover)?;
    let family = Family::new(f.clone())?;
    let sieve = build_pf(&f, config.limit)?;
    Ok(Setup { cover, family, sieve })
}

fn params(config: &RunConfig, setup: &Setup) -> Result<DiversityParams, CliError> {
    let d = config.d.unwrap_or(setup.family.degree());
    let epsilon = config.epsilon.unwrap_or(default_epsilon(d.max(1)));
    let delta = config.delta.unwrap_or(setup.sieve.delta_hat());
    let mut p = DiversityParams::paper(config.x, epsilon, delta, d)?;
    if let Some(k) = config.k {
        p = p.with_k(k);
    }
    if let Some(y) = config.y {
        p = p.with_y(y);
    }
    if let Some(tail) = config.tail {
        p = p.with_tail(tail);
    }
    if let Some((lo, hi)) = config.window {
        p = p.with_window(lo, hi);
    }
    p.validate()?;
    Ok(p)
}

fn print_params(config: &RunConfig, p: &DiversityParams) {
    let (lo, hi) = p.window();
    println!("mode: {}", config.mode);
    println!("x: {}", p.x());
    println!("epsilon: {}", p.epsilon());
    println!("delta: {:.6}", p.delta());
    println!("d: {}", p.d());
    println!("kappa: {:.6}", p.kappa());
    println!("k: {}", p.k());
    println!("y: {}", p.y());
    println!("tail_exponent: {}", p.tail_exponent());
    println!("window: [{lo}, {hi}]");
}

pub fn analyze(config: &RunConfig) -> Result<(), CliError> {
    let s = setup(config)?;
    let f = s.family.poly();
    println!("cover: {}", config.cover);
    println!("nu: {}", s.cover.nu());
    println!("disc_u: {}", discriminant_in_u(&s.cover));
    println!("F: {f}");
    println!("d: {}", s.family.degree());
    println!("disc_F: {}", s.family.discriminant());
    println!("sieve_limit: {}", s.sieve.limit());
    let (hits, total) = s.sieve.delta_ratio();
    println!("P_F: {hits}");
    println!("pi(limit): {total}");
    println!("delta_hat: {:.6}", s.sieve.delta_hat());
    match check_density_floor(&s.sieve, s.family.degree()) {
        Ok(r) => println!(
            "density_floor: {} (threshold {:.6}, margin {:.6})",
            if r.pass { "pass" } else { "FAIL" },
            r.threshold,
            r.margin
        ),
        Err(e) => println!("density_floor: not checked ({e})"),
    }
    Ok(())
}

pub fn sieve(config: &RunConfig) -> Result<(), CliError> {
    let s = setup(config)?;
    let p = params(config, &s)?;
    let mf = enumerate_mf(&s.sieve, &p)?;
    let path = output::write_mf(&config.out, &mf.entries)?;
    println!("F: {}", s.family.poly());
    print_params(config, &p);
    println!("mf_size: {}", mf.entries.len());
    if !mf.entries.is_empty() {
        println!("log_size_over_log_x: {:.6}", (mf.entries.len() as f64).ln() / p.x().ln());
    }
    if let Some(w) = &mf.warning {
        eprintln!("warning: {w}");
    }
    println!("wrote: {}", path.display());
    Ok(())
}

pub fn witness(config: &RunConfig) -> Result<(), CliError> {
    let s = setup(config)?;
    let p = params(config, &s)?;
    let mf = enumerate_mf(&s.sieve, &p)?;
    let choice = match config.witness_choice {
        Choice::Canonical => WitnessChoice::Canonical,
        Choice::Random => WitnessChoice::Random { seed: config.seed },
    };
    let mut batch = build_witnesses(&s.family, &mf.entries, &p, choice, config.workers)?;
    let stats = classify_greedy(&mut batch.records, p.d(), mf.entries.len());
    let cliques = find_cliques(&mf.entries);
    let witness_path = output::write_witnesses(&config.out, &batch.records)?;
    let clique_path = output::write_cliques(&config.out, &cliques.cliques)?;

    println!("F: {}", s.family.poly());
    print_params(config, &p);
    println!("mf_size: {}", mf.entries.len());
    println!("witnesses: {}", batch.records.len());
    println!("skipped_small_primes: {}", batch.skipped.len());
    println!("beyond_x: {}", batch.beyond_x);
    println!("greedy: {}", stats.greedy);
    println!("generous: {}", stats.generous);
    println!("half_greedy: {}", stats.half_greedy());
    let target = mf.entries.len() as f64 / (12.0 * p.d() as f64);
    println!(
        "distinct_n_vs_mf_over_12d: {} vs {:.3} ({})",
        stats.distinct_n,
        target,
        if stats.distinct_n as f64 >= target { "above" } else { "below" }
    );
    println!("cliques: {} (rejected triples {})", cliques.cliques.len(), cliques.rejected);
    if mf.entries.is_empty() {
        eprintln!("warning: {}", mf.warning.as_deref().unwrap_or("M_F(x) is empty"));
    } else {
        let ns: BTreeSet<u64> = batch.records.iter().map(|r| r.n_m).collect();
        let h = omega_histogram(s.family.poly(), ns, &p, config.budget)?;
        println!(
            "omega_classes: E {} L {} R {} indeterminate {}",
            h.enormous, h.large, h.reasonable, h.indeterminate
        );
        if p.x() <= HEAVY_SCAN_MAX_X {
            let heavy = heavy_n_scan(s.family.poly(), &mf.entries, &p, config.workers)?;
            println!(
                "heavy_n: {} above {} (density {:.3e}, reference {:.3e})",
                heavy.heavy.len(),
                heavy.threshold,
                heavy.density,
                heavy.bound
            );
        } else {
            println!("heavy_n: skipped for x > {HEAVY_SCAN_MAX_X:e}");
        }
    }
    println!("wrote: {}", witness_path.display());
    println!("wrote: {}", clique_path.display());
    Ok(())
}

pub fn diversity(config: &RunConfig) -> Result<(), CliError> {
    let cover = CurveCover::parse(&config.cover)?;
    let census_config = CensusConfig {
        budget: config.budget,
        workers: config.workers,
        sieve_limit: config.limit,
        delta: config.delta,
        d: config.d,
        genus: config.genus,
    };
    let census = run_census(&cover, config.n, &census_config)?;
    for (n, reason) in &census.skipped {
        eprintln!("skipped n = {n}: {reason}");
    }
    let census_path = output::write_census(&config.out, &census)?;
    let mut summary = vec![
        ("N", census.n_max.to_string()),
        ("distinct_lower_bound", census.distinct_lower_bound.to_string()),
        ("reducible_count", census.reducible_count.to_string()),
        ("unknown_count", census.unknown_count.to_string()),
        ("skipped", census.skipped.len().to_string()),
        ("F", census.critical_poly.to_string()),
        ("d", census.d.to_string()),
        ("delta", format!("{:.6}", census.delta)),
        ("eta", format!("{:.6e}", census.eta.eta)),
        ("N_over_logN", format!("{:.3}", census.n_over_log_n())),
        ("bound_value", format!("{:.3}", census.bound_value())),
        ("mode", config.mode.to_string()),
    ];
    if let Some(fallback) = census.eta.fallback {
        summary.insert(9, ("eta_fallback", format!("{fallback:.6e}")));
    }
    let summary_path = output::write_summary(&config.out, "summary.csv", &summary)?;
    for (k, v) in &summary {
        println!("{k}: {v}");
    }
    println!("wrote: {}", census_path.display());
    println!("wrote: {}", summary_path.display());
    Ok(())
}

/// Moduli built from two or three primes of `P_F` above 3.
fn random_moduli(sieve: &ChebotarevSieve, count: usize, seed: u64) -> Vec<Squarefree> {
    let usable: Vec<u64> = sieve.primes().iter().copied().filter(|&p| p > 3 && p < 1000).collect();
    if usable.len() < 3 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let primes = usable.choose_multiple(&mut rng, 2 + i % 2).copied().collect();
            Squarefree::from_primes(primes).expect("distinct primes")
        })
        .collect()
}

/// Smallest `n` in `1..=m` with `m | F(n)`.
fn brute_root(f: &IntPoly, m: u64) -> Option<u64> {
    (1..=m).find(|&n| f.eval_mod(n, m) == 0)
}

/// Feeds moduli that break the shift lemma's hypotheses to the kernel; each
/// must come back as a precondition error. Returns `(rejected, accepted)`.
fn inject_faults(family: &Family, sieve: &ChebotarevSieve) -> (Vec<u64>, Vec<u64>) {
    let f = family.poly();
    let mut bad_primes: Vec<u64> = Vec::new();
    if let Ok(fac) = factor_integer(family.discriminant(), 1 << 16, 1 << 20) {
        bad_primes.extend(fac.factors.iter().filter_map(|(p, _)| u64::try_from(p).ok()).filter(|&p| p < 1000));
    }
    bad_primes.push(2);
    bad_primes.sort_unstable();
    bad_primes.dedup();
    let mut rejected = Vec::new();
    let mut accepted = Vec::new();
    for p in bad_primes {
        let Some(&q) = sieve.primes().iter().find(|&&q| q > 3 && q != p) else {
            continue;
        };
        let m = p * q;
        let Some(n) = brute_root(f, m) else {
            continue;
        };
        let sq = Squarefree::from_primes(vec![p, q]).expect("distinct primes");
        match family.exact_divisor_shift(&sq, &BigInt::from(n)) {
            Err(Error::Precondition(_)) => rejected.push(m),
            _ => accepted.push(m),
        }
    }
    (rejected, accepted)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn verify(config: &RunConfig) -> Result<(), CliError> {
    let s = setup(config)?;
    let f = s.family.poly();
    let d = s.family.degree();
    let mut hard: Vec<&str> = Vec::new();
    println!("F: {f}");
    println!("seed: {}", config.seed);

    let lemma = lemma_suite(config.seed, config.trials);
    println!(
        "lemma: {} ({} instances, shift counts {:?}, violations {}, errors {})",
        verdict(lemma.passed()),
        lemma.instances,
        lemma.shift_counts,
        lemma.violations.len(),
        lemma.errors.len()
    );
    for (g, m, n) in &lemma.violations {
        eprintln!("lemma violation: F = {g}, m = {m}, n = {n}");
    }
    for e in &lemma.errors {
        eprintln!("lemma error: {e}");
    }
    if !lemma.passed() {
        hard.push("lemma");
    }

    let rho = rho_suite(config.seed, 200, 10_000);
    println!(
        "rho: {} ({} instances, mismatches {}, multiplicativity {}, bound {})",
        verdict(rho.passed()),
        rho.instances,
        rho.mismatches.len(),
        rho.multiplicativity_failures,
        rho.bound_failures
    );
    if !rho.passed() {
        hard.push("rho");
    }

    let p = params(config, &s)?;
    let mf = enumerate_mf(&s.sieve, &p)?;
    let mut records = build_witnesses(&s.family, &mf.entries, &p, WitnessChoice::Canonical, config.workers)?.records;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for m in random_moduli(&s.sieve, 200, config.seed) {
        records.push(s.family.primitive_witness(&m)?);
        records.push(s.family.random_witness(&m, &mut rng)?);
    }
    let bad: Vec<u64> = records.iter().filter(|r| !recheck_witness(&s.family, r)).map(|r| r.m).collect();
    println!(
        "witness_recheck: {} ({} witnesses, {} from M_F(x), failures {})",
        verdict(bad.is_empty()),
        records.len(),
        mf.entries.len(),
        bad.len()
    );
    if !bad.is_empty() {
        eprintln!("witness re-check failed for m in {bad:?}");
        hard.push("witness");
    }

    let (rejected, accepted) = inject_faults(&s.family, &s.sieve);
    println!(
        "fault_injection: {} ({} rejected as precondition {:?}, accepted {:?})",
        verdict(accepted.is_empty()),
        rejected.len(),
        rejected,
        accepted
    );
    if !accepted.is_empty() {
        hard.push("fault injection");
    }

    let limit = config.verify_limit;
    let c = property_c_sweep(&s.family, limit, 5);
    println!(
        "property_c: {} ({} primes, {} instances, skipped {:?}, violations {})",
        verdict(c.violations.is_empty()),
        c.primes_checked,
        c.instances,
        c.skipped,
        c.violations.len()
    );
    if !c.violations.is_empty() {
        eprintln!("property C violations (p, n): {:?}", c.violations);
        hard.push("property C");
    }

    let small = build_pf(f, limit)?;
    let dr = verify_property_d(&small, limit);
    println!(
        "property_d: {} ({} primes, exceptions {:?}, clean above {})",
        verdict(dr.failures.len() <= config.cap),
        dr.checked,
        dr.failures,
        dr.threshold
    );
    let er = verify_property_e(f, d, 1..=limit, config.budget)?;
    let listed: Vec<u64> = er.exceptions.iter().map(|(n, _)| *n).collect();
    println!(
        "property_e: {} ({} values, exceptions {:?}, zeros {:?}, indeterminate {}, clean from {})",
        verdict(er.passes(config.cap)),
        er.checked,
        listed,
        er.zeros,
        er.indeterminate.len(),
        er.threshold
    );

    let n = config.n.clamp(10, 2000);
    let census = run_census(
        &s.cover,
        n,
        &CensusConfig {
            budget: config.budget,
            workers: config.workers,
            sieve_limit: config.limit,
            delta: config.delta,
            d: config.d,
            genus: config.genus,
        },
    )?;
    let a = property_a_spot_check(&s.cover, &census);
    println!(
        "property_a: {} ({} fibers up to {n}, exceptions {})",
        verdict(a.exceptions.is_empty()),
        a.checked,
        a.exceptions.len()
    );

    if hard.is_empty() {
        println!("verify: pass");
        Ok(())
    } else {
        Err(CliError::Violation(format!("verify failed: {}", hard.join(", "))))
    }
}
