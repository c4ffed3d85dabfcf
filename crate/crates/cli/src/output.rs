//! CSV files written to the output directory.

use std::fs;
use std::path::{Path, PathBuf};

use csv::{Terminator, WriterBuilder};
use divlab::dz::{CliqueRecord, WitnessRecord};
use divlab::fields::DiversityCensus;
use divlab::sieve::MfEntry;

use crate::CliError;

fn write_rows<I, R>(dir: &Path, name: &str, header: &[&str], rows: I) -> Result<PathBuf, CliError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut w = WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_path(&path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(path)
}

pub fn write_mf(dir: &Path, entries: &[MfEntry]) -> Result<PathBuf, CliError> {
    write_rows(
        dir,
        "mf.csv",
        &["m", "factorization", "P", "m1"],
        entries.iter().map(|e| {
            [
                e.m.to_string(),
                e.factorization_string(),
                e.large_prime().to_string(),
                e.cofactor().to_string(),
            ]
        }),
    )
}

pub fn write_witnesses(dir: &Path, records: &[WitnessRecord]) -> Result<PathBuf, CliError> {
    write_rows(
        dir,
        "witnesses.csv",
        &["m", "factorization", "n_m", "shift_l", "greedy"],
        records.iter().map(|r| {
            [
                r.m.to_string(),
                r.factorization_string(),
                r.n_m.to_string(),
                r.shift_l.to_string(),
                r.greedy.to_string(),
            ]
        }),
    )
}

pub fn write_cliques(dir: &Path, cliques: &[CliqueRecord]) -> Result<PathBuf, CliError> {
    write_rows(
        dir,
        "cliques.csv",
        &["P", "m1", "m2", "m3", "type"],
        cliques.iter().map(|c| {
            [
                c.p.to_string(),
                c.m1.to_string(),
                c.m2.to_string(),
                c.m3.to_string(),
                c.kind.to_string(),
            ]
        }),
    )
}

pub fn write_census(dir: &Path, census: &DiversityCensus) -> Result<PathBuf, CliError> {
    write_rows(
        dir,
        "census.csv",
        &["n", "fiber_degree", "irreducible", "fingerprint", "new_field"],
        census.rows.iter().map(|r| {
            [
                r.n.to_string(),
                r.fiber_degree.to_string(),
                r.irreducible.to_string(),
                r.fingerprint.as_ref().map(|f| f.to_string()).unwrap_or_default(),
                r.new_field.to_string(),
            ]
        }),
    )
}

/// Two-column `key,value` file.
pub fn write_summary(dir: &Path, name: &str, pairs: &[(&str, String)]) -> Result<PathBuf, CliError> {
    write_rows(dir, name, &["key", "value"], pairs.iter().map(|(k, v)| [k.to_string(), v.clone()]))
}
