//! Run configuration: command-line flags layered over a `key = value` file,
//! then `DIVLAB_WORKERS`, then defaults.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use divlab::factorization::FactorBudget;

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    #[default]
    Paper,
    Override,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Paper => "paper",
            Mode::Override => "override",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Choice {
    #[default]
    Canonical,
    Random,
}

/// Every option of every subcommand. All fields are optional so that a
/// config file can fill in what the flags leave out.
#[derive(Args, Clone, Debug, Default)]
pub struct Opts {
    /// Config file of `key = value` lines; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Cover polynomial g(t, u), e.g. "u^2 - t"
    #[arg(long)]
    pub cover: Option<String>,
    /// Number of fibers in the census
    #[arg(long = "N", value_parser = parse_count)]
    pub n: Option<u64>,
    #[arg(long, value_parser = parse_real)]
    pub x: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long, value_parser = parse_real)]
    pub epsilon: Option<f64>,
    /// Replaces the measured density of P_F
    #[arg(long, value_parser = parse_real)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_parser = parse_real)]
    pub y: Option<f64>,
    /// Exponent a in p_max(m) >= x^a; 0 disables it
    #[arg(long, value_parser = parse_real)]
    pub tail: Option<f64>,
    #[arg(long = "window-lo", value_parser = parse_count)]
    pub window_lo: Option<u64>,
    #[arg(long = "window-hi", value_parser = parse_count)]
    pub window_hi: Option<u64>,
    /// Sieve limit for P_F
    #[arg(long, value_parser = parse_count)]
    pub limit: Option<u64>,
    /// Pollard rho iterations per integer factorization
    #[arg(long, value_parser = parse_count)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Replaces deg F
    #[arg(long)]
    pub d: Option<usize>,
    /// Genus of the cover, for the fallback eta
    #[arg(long)]
    pub genus: Option<usize>,
    /// Instances of the randomized lemma suite
    #[arg(long, value_parser = parse_count)]
    pub trials: Option<u64>,
    /// Largest tolerated number of Property D/E exceptions
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long = "witness-choice", value_enum)]
    pub witness_choice: Option<Choice>,
    /// Range of n and p for the Property C/D/E sweeps
    #[arg(long = "verify-limit", value_parser = parse_count)]
    pub verify_limit: Option<u64>,
}

/// Accepts plain integers and integral values like `1e6`.
fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 => Ok(v as u64),
        _ => Err(format!("`{s}` is not a non-negative integer")),
    }
}

fn parse_real(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a finite number")),
    }
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| CliError::Config(format!("bad value `{v}` for `{key}`")))
}

fn set<T>(slot: &mut Option<T>, value: T) {
    if slot.is_none() {
        *slot = Some(value);
    }
}

impl Opts {
    /// Fills unset options from config file text.
    pub fn fill_from_text(&mut self, text: &str) -> Result<(), CliError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!("line {}: expected `key = value`", i + 1)));
            };
            let (key, value) = (key.trim(), value.trim().trim_matches('"'));
            let bad = |e: String| CliError::Config(format!("line {}: {key}: {e}", i + 1));
            match key {
                "cover" => set(&mut self.cover, value.to_string()),
                "N" | "n" => set(&mut self.n, parse_count(value).map_err(bad)?),
                "x" => set(&mut self.x, parse_real(value).map_err(bad)?),
                "mode" => set(&mut self.mode, Mode::from_str(value, true).map_err(bad)?),
                "epsilon" => set(&mut self.epsilon, parse_real(value).map_err(bad)?),
                "delta" => set(&mut self.delta, parse_real(value).map_err(bad)?),
                "k" => set(&mut self.k, parse_value(key, value)?),
                "y" => set(&mut self.y, parse_real(value).map_err(bad)?),
                "tail" | "tail_exponent" => set(&mut self.tail, parse_real(value).map_err(bad)?),
                "window_lo" => set(&mut self.window_lo, parse_count(value).map_err(bad)?),
                "window_hi" => set(&mut self.window_hi, parse_count(value).map_err(bad)?),
                "limit" => set(&mut self.limit, parse_count(value).map_err(bad)?),
                "budget" => set(&mut self.budget, parse_count(value).map_err(bad)?),
                "workers" => set(&mut self.workers, parse_value(key, value)?),
                "seed" => set(&mut self.seed, parse_value(key, value)?),
                "out" => set(&mut self.out, PathBuf::from(value)),
                "d" => set(&mut self.d, parse_value(key, value)?),
                "genus" => set(&mut self.genus, parse_value(key, value)?),
                "trials" => set(&mut self.trials, parse_count(value).map_err(bad)?),
                "cap" => set(&mut self.cap, parse_value(key, value)?),
                "witness_choice" => set(&mut self.witness_choice, Choice::from_str(value, true).map_err(bad)?),
                "verify_limit" => set(&mut self.verify_limit, parse_count(value).map_err(bad)?),
                _ => return Err(CliError::Config(format!("line {}: unknown key `{key}`", i + 1))),
            }
        }
        Ok(())
    }

    fn fill_from_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        self.fill_from_text(&text)
    }
}

/// Validated settings for one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub cover: String,
    pub n: u64,
    pub x: f64,
    pub mode: Mode,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub k: Option<usize>,
    pub y: Option<f64>,
    pub tail: Option<f64>,
    pub window: Option<(u64, u64)>,
    pub limit: u64,
    pub budget: FactorBudget,
    pub workers: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub d: Option<usize>,
    pub genus: Option<usize>,
    pub trials: usize,
    pub cap: usize,
    pub witness_choice: Choice,
    pub verify_limit: u64,
}

impl RunConfig {
    /// Resolves flags, the config file named by `--config` and the
    /// environment into a checked configuration.
    pub fn resolve(mut opts: Opts, env_workers: Option<String>) -> Result<Self, CliError> {
        if let Some(path) = opts.config.clone() {
            opts.fill_from_file(&path)?;
        }
        if opts.workers.is_none() {
            if let Some(w) = env_workers.filter(|w| !w.trim().is_empty()) {
                opts.workers = Some(parse_value("DIVLAB_WORKERS", w.trim())?);
            }
        }
        let config_err = |msg: String| Err(CliError::Config(msg));

        let mode = opts.mode.unwrap_or_default();
        if mode == Mode::Paper {
            let set: Vec<&str> = [
                ("epsilon", opts.epsilon.is_some()),
                ("delta", opts.delta.is_some()),
                ("k", opts.k.is_some()),
                ("y", opts.y.is_some()),
                ("tail", opts.tail.is_some()),
                ("window", opts.window_lo.is_some() || opts.window_hi.is_some()),
            ]
            .into_iter()
            .filter_map(|(name, given)| given.then_some(name))
            .collect();
            if !set.is_empty() {
                return config_err(format!("{} only allowed with --mode override", set.join(", ")));
            }
        }
        let Some(cover) = opts.cover else {
            return config_err("no cover given (use --cover or `cover = ...`)".into());
        };
        let window = match (opts.window_lo, opts.window_hi) {
            (None, None) => None,
            (Some(lo), Some(hi)) if 0 < lo && lo <= hi => Some((lo, hi)),
            (Some(_), Some(_)) => return config_err("window must satisfy 0 < lo <= hi".into()),
            _ => return config_err("window needs both window_lo and window_hi".into()),
        };

        let x = opts
            .x
            .unwrap_or_else(|| opts.limit.map_or(1e6, |l| (l as f64).min(1e6)));
        let positive = [
            ("x", x > 0.0),
            ("N", opts.n != Some(0)),
            ("epsilon", opts.epsilon.is_none_or(|v| v > 0.0)),
            ("delta", opts.delta.is_none_or(|v| v > 0.0 && v <= 1.0)),
            ("k", opts.k != Some(0)),
            ("y", opts.y.is_none_or(|v| v > 0.0)),
            ("tail", opts.tail.is_none_or(|v| (0.0..=1.0).contains(&v))),
            ("limit", opts.limit != Some(0)),
            ("budget", opts.budget != Some(0)),
            ("workers", opts.workers != Some(0)),
            ("d", opts.d != Some(0)),
            ("trials", opts.trials != Some(0)),
            ("verify_limit", opts.verify_limit.is_none_or(|v| v >= 10)),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, ok)| !ok) {
            return config_err(format!("{name} is out of range"));
        }
        let limit = opts.limit.unwrap_or_else(|| (x.ceil() as u64).max(100_000));
        if (limit as f64) < x {
            return config_err(format!("sieve limit {limit} is below x = {x}"));
        }

        Ok(RunConfig {
            cover,
            n: opts.n.unwrap_or(1000),
            x,
            mode,
            epsilon: opts.epsilon,
            delta: opts.delta,
            k: opts.k,
            y: opts.y,
            tail: opts.tail,
            window,
            limit,
            budget: FactorBudget {
                effort: opts.budget.unwrap_or(FactorBudget::default().effort),
                ..FactorBudget::default()
            },
            workers: opts.workers.unwrap_or(1),
            seed: opts.seed.unwrap_or(0),
            out: opts.out.unwrap_or_else(|| PathBuf::from("divlab-out")),
            d: opts.d,
            genus: opts.genus,
            trials: opts.trials.unwrap_or(1000) as usize,
            cap: opts.cap.unwrap_or(20),
            witness_choice: opts.witness_choice.unwrap_or_default(),
            verify_limit: opts.verify_limit.unwrap_or(10_000),
        })
    }
}
