use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn divlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divlab"))
        .args(args)
        .env_remove("DIVLAB_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn field<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{out}"))
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

const OVERRIDE_EXAMPLE: &[&str] = &[
    "--cover", "u^2 - t^2 - 1", "--mode", "override", "--x", "200", "--epsilon", "0.5", "--delta", "0.5",
    "--window-lo", "50", "--window-hi", "100", "--k", "1", "--y", "5", "--tail", "0", "--limit", "200",
];

#[test]
fn analyze_square_root_cover() {
    let o = divlab(&["analyze", "--cover", "u^2 - t", "--limit", "1e5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(field(&out, "F"), "T");
    assert_eq!(field(&out, "d"), "1");
    assert_eq!(field(&out, "delta_hat"), "1.000000");
    assert_eq!(field(&out, "P_F"), "9592");
    assert!(field(&out, "density_floor").starts_with("pass"));
}

#[test]
fn analyze_cubic_cover() {
    let o = divlab(&["analyze", "--cover", "u^2 - t^3 + 3*t^2 - 2*t", "--limit", "1e5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(field(&out, "F"), "T^3 - 3*T^2 + 2*T");
    assert_eq!(field(&out, "d"), "3");
    assert_eq!(field(&out, "disc_F"), "4");
}

#[test]
fn exit_codes() {
    let o = divlab(&["analyze", "--cover", "u^2 - (t"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("parse error"));
    // degree 1 in u is not a cover
    assert_eq!(divlab(&["analyze", "--cover", "u - t"]).status.code(), Some(2));
    // constant discriminant, no critical value
    assert_eq!(divlab(&["analyze", "--cover", "u^2 - 2"]).status.code(), Some(2));
    assert_eq!(divlab(&["analyze"]).status.code(), Some(1));
    assert_eq!(divlab(&["analyze", "--cover", "u^2 - t", "--k", "2"]).status.code(), Some(1));
    assert_eq!(divlab(&["analyze", "--cover", "u^2 - t", "--x", "1e6", "--limit", "1e3"]).status.code(), Some(1));
    assert_eq!(divlab(&["analyze", "--bogus"]).status.code(), Some(1));
    assert_eq!(divlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn witness_override_example() {
    let dir = TempDir::new().unwrap();
    let mut args = vec!["witness", "--out", dir.path().to_str().unwrap()];
    args.extend_from_slice(OVERRIDE_EXAMPLE);
    let o = divlab(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        read(dir.path(), "witnesses.csv"),
        "m,factorization,n_m,shift_l,greedy\n65,5*13,8,0,true\n85,5*17,13,0,true\n"
    );
    let out = stdout(&o);
    assert_eq!(field(&out, "greedy"), "2");
    assert_eq!(field(&out, "d"), "2");
    assert!(field(&out, "distinct_n_vs_mf_over_12d").starts_with("2 vs 0.083"));

    // an explicit d changes the greedy threshold and the comparison row
    args.extend_from_slice(&["--d", "5"]);
    let out = stdout(&divlab(&args));
    assert_eq!(field(&out, "d"), "5");
    assert!(field(&out, "distinct_n_vs_mf_over_12d").starts_with("2 vs 0.033"));
}

#[test]
fn witness_paper_mode_is_empty_with_warning() {
    let dir = TempDir::new().unwrap();
    let o = divlab(&["witness", "--cover", "u^2 - t^2 - 1", "--x", "1e6", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning"));
    assert_eq!(field(&stdout(&o), "mf_size"), "0");
    assert_eq!(read(dir.path(), "witnesses.csv"), "m,factorization,n_m,shift_l,greedy\n");
}

#[test]
fn sieve_writes_mf() {
    let dir = TempDir::new().unwrap();
    let mut args = vec!["sieve", "--out", dir.path().to_str().unwrap()];
    args.extend_from_slice(OVERRIDE_EXAMPLE);
    let o = divlab(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(read(dir.path(), "mf.csv"), "m,factorization,P,m1\n65,5*13,13,5\n85,5*17,17,5\n");
}

#[test]
fn diversity_small_census() {
    let dir = TempDir::new().unwrap();
    let o = divlab(&["diversity", "--cover", "u^2 - t", "--N", "100", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(field(&out, "reducible_count"), "10");
    assert_eq!(field(&out, "distinct_lower_bound"), "60");
    assert_eq!(field(&out, "mode"), "paper");
    let census = read(dir.path(), "census.csv");
    assert_eq!(census.lines().count(), 101);
    assert!(census.contains("\n4,2,false,,false\n"));
    assert!(census.contains("\n8,2,true,2,false\n"));
    assert!(!census.contains('\r'));
    assert!(read(dir.path(), "summary.csv").starts_with("key,value\nN,100\n"));

    assert_eq!(divlab(&["diversity", "--cover", "u^2 - t", "--N", "5"]).status.code(), Some(1));
}

/// Squarefree integers in `2..=n`, by sieving multiples of squares.
fn squarefree_kernels(n: usize) -> usize {
    let mut sf = vec![true; n + 1];
    for k in 2..=n.isqrt() {
        for j in (k * k..=n).step_by(k * k) {
            sf[j] = false;
        }
    }
    sf[2..].iter().filter(|&&b| b).count()
}

#[test]
fn diversity_matches_kernel_sieve() {
    let dir = TempDir::new().unwrap();
    let o = divlab(&["diversity", "--cover", "u^2 - t", "--N", "1e4", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(field(&out, "distinct_lower_bound"), squarefree_kernels(10_000).to_string());
    assert_eq!(field(&out, "reducible_count"), "100");
}

#[test]
fn outputs_do_not_depend_on_workers() {
    let run = |cmd: &str, workers: &str, extra: &[&str]| {
        let dir = TempDir::new().unwrap();
        let mut args = vec![cmd, "--workers", workers, "--out", dir.path().to_str().unwrap()];
        args.extend_from_slice(extra);
        let o = divlab(&args);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        dir
    };
    let wide = [
        "--cover", "u^2 - t^2 - 1", "--mode", "override", "--x", "1e5", "--k", "1", "--y", "5", "--tail", "0.5",
        "--witness-choice", "random", "--seed", "7",
    ];
    let a = run("witness", "1", &wide);
    let b = run("witness", "4", &wide);
    let witnesses = read(a.path(), "witnesses.csv");
    assert!(witnesses.lines().count() > 600);
    assert_eq!(witnesses, read(b.path(), "witnesses.csv"));
    assert_eq!(read(a.path(), "cliques.csv"), read(b.path(), "cliques.csv"));

    let census = ["--cover", "u^3 - t*u - 1", "--N", "500", "--limit", "1e4"];
    let a = run("diversity", "1", &census);
    let b = run("diversity", "3", &census);
    assert_eq!(read(a.path(), "census.csv"), read(b.path(), "census.csv"));
    assert_eq!(read(a.path(), "summary.csv"), read(b.path(), "summary.csv"));
}

#[test]
fn config_file_and_environment() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# census\ncover = u^2 - t\nN = 100\nworkers = 2\nout = ignored\n").unwrap();
    let out_dir = dir.path().join("out");
    let o = divlab(&["diversity", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(field(&stdout(&o), "N"), "100");
    assert!(out_dir.join("census.csv").exists());
    assert!(!dir.path().join("ignored").exists());

    fs::write(&cfg, "cover = u^2 - t\ncolour = red\n").unwrap();
    assert_eq!(divlab(&["analyze", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));

    let o = Command::new(env!("CARGO_BIN_EXE_divlab"))
        .args(["analyze", "--cover", "u^2 - t", "--limit", "1e4"])
        .env("DIVLAB_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_square_root_cover() {
    let o = divlab(&["verify", "--cover", "u^2 - t", "--limit", "1e5"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let out = stdout(&o);
    assert_eq!(field(&out, "verify"), "pass");
    // 2 * 3 has a prime not above omega, so the kernel refuses it
    assert!(field(&out, "fault_injection").contains("1 rejected as precondition"));
}

#[test]
fn verify_cubic_cover() {
    let o = divlab(&["verify", "--cover", "u^2 - t*(t - 1)*(t - 2)", "--limit", "1e5", "--workers", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let out = stdout(&o);
    assert_eq!(field(&out, "F"), "T^3 - 3*T^2 + 2*T");
    assert_eq!(field(&out, "verify"), "pass");
    // disc F = 4, so m = 2 * 5 shares a prime with it
    assert!(field(&out, "fault_injection").contains("[10]"));
    assert!(field(&out, "property_c").contains("skipped [2]"));
}

#[test]
fn verify_rechecks_mf_witnesses_in_override_mode() {
    let mut args = vec!["verify", "--trials", "100"];
    args.extend_from_slice(OVERRIDE_EXAMPLE);
    let o = divlab(&args);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(field(&stdout(&o), "witness_recheck").contains("2 from M_F(x)"));
}
