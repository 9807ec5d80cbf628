//! Acceptance suite: every verification criterion at its canonical sample
//! sizes and pinned tolerances, one test per criterion, each printing a
//! `criterion NN <name>: PASS|FAIL` line (visible with `--nocapture`).
//!
//! Criterion 13 (determinism) additionally exercises the CLI binary:
//! `verify-all --budget small` twice with the same master seed must produce
//! byte-identical reports across 1, 4, and 16 worker threads.

use std::path::Path;
use std::process::Command;

use randquad::suite::{run_criterion, Budget, DEFAULT_MASTER_SEED};

fn check(id: u32) {
    let report = run_criterion(id, Budget::Full, DEFAULT_MASTER_SEED)
        .unwrap_or_else(|e| panic!("criterion {id} errored: {e}"));
    println!("{}", report.summary_line());
    for claim in &report.claims {
        println!(
            "    {}: observed {} threshold {} -> {}",
            claim.name,
            claim.observed,
            claim.threshold,
            if claim.pass { "ok" } else { "FAIL" }
        );
    }
    assert!(report.pass, "{}: {:#?}", report.summary_line(), report.claims);
}

#[test]
fn criterion_01_closed_form_green() {
    check(1);
}

#[test]
fn criterion_02_functional_equation() {
    check(2);
}

#[test]
fn criterion_03_pushforward_identity() {
    check(3);
}

#[test]
fn criterion_04_exponent_identity() {
    check(4);
}

#[test]
fn criterion_05_sub_quarter_regime() {
    check(5);
}

#[test]
fn criterion_06_asymptotics() {
    check(6);
}

#[test]
fn criterion_07_continuity_scan() {
    check(7);
}

#[test]
fn criterion_08_perturbation_constancy() {
    check(8);
}

#[test]
fn criterion_09_harmonicity() {
    check(9);
}

#[test]
fn criterion_10_local_dimension() {
    check(10);
}

#[test]
fn criterion_11_fast_escape_decay() {
    check(11);
}

#[test]
fn criterion_12_stability() {
    check(12);
}

#[test]
fn criterion_13_determinism_in_process() {
    check(13);
}

fn run_verify_all(dir: &Path, threads: u32) {
    let status = Command::new(env!("CARGO_BIN_EXE_randquad"))
        .args([
            "verify-all",
            "--budget",
            "small",
            "--seed",
            "7",
            "--threads",
            &threads.to_string(),
            "--out",
        ])
        .arg(dir)
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .status()
        .expect("spawn randquad");
    assert!(status.success(), "verify-all failed with {threads} threads");
}

#[test]
fn criterion_13_determinism_of_cli_reports() {
    let base = tempfile::tempdir().expect("tempdir");
    let dirs = [
        base.path().join("t1"),
        base.path().join("t4"),
        base.path().join("t16"),
        base.path().join("t16-repeat"),
    ];
    for (dir, threads) in dirs.iter().zip([1u32, 4, 16, 16]) {
        run_verify_all(dir, threads);
    }
    let reference_report = std::fs::read(dirs[0].join("report.json")).unwrap();
    let reference_table = std::fs::read(dirs[0].join("tables/criteria.csv")).unwrap();
    let reference_config = std::fs::read(dirs[0].join("config.resolved")).unwrap();
    assert!(!reference_report.is_empty());
    for dir in &dirs[1..] {
        assert_eq!(
            std::fs::read(dir.join("report.json")).unwrap(),
            reference_report,
            "report.json differs in {}",
            dir.display()
        );
        assert_eq!(
            std::fs::read(dir.join("tables/criteria.csv")).unwrap(),
            reference_table
        );
        assert_eq!(
            std::fs::read(dir.join("config.resolved")).unwrap(),
            reference_config
        );
    }
    println!("criterion 13 determinism (CLI byte-identity): PASS");
}
