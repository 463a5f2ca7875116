mod common;

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contact-prolong")).args(args).output().unwrap()
}

fn problem(name: &str) -> String {
    common::problem_path(name).to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn sperp_report() {
    let out = run(&["sperp", "1", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["dim"], 6);
    let text = String::from_utf8(run(&["sperp", "2", "2"]).stdout).unwrap();
    assert!(text.lines().any(|l| l == "dim: 11"), "{text}");
}

#[test]
fn prolong_reports_chain_and_bound() {
    let out = run(&["prolong", &problem("pdes"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["chain"]["rank_t"], 5);
    assert_eq!(v["chain"]["verdict"], "FiniteType");
    assert_eq!(v["oracle"]["stabilized_dim"], 5);
    assert!(v.get("timings_ms").is_none());
}

#[test]
fn reports_are_deterministic() {
    let a = run(&["prolong", &problem("four_equations"), "--json"]);
    let b = run(&["prolong", &problem("four_equations"), "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn require_finite_type_exit_code() {
    let x_only = problem("x_only");
    assert_eq!(run(&["prolong", &x_only]).status.code(), Some(0));
    assert_eq!(run(&["prolong", &x_only, "--require-finite-type"]).status.code(), Some(2));
    assert_eq!(run(&["prolong", &problem("pdes"), "--require-finite-type"]).status.code(), Some(0));
}

#[test]
fn validation_errors_exit_one() {
    assert_eq!(run(&["prolong", "/nonexistent.toml"]).status.code(), Some(1));
    assert_eq!(run(&["sperp", "x", "1"]).status.code(), Some(1));
    assert_eq!(run(&["bound", "1", "0"]).status.code(), Some(1));
    let bad = std::env::temp_dir().join("contact-prolong-bad.toml");
    std::fs::write(&bad, "format_version = 99\nn = 1\norder = 1\nrank_e = 1\nrank_f = 1\n").unwrap();
    assert_eq!(run(&["symbol", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn verify_and_oracle_commands() {
    let pdes = problem("pdes");
    let out = run(&["verify", &pdes, "--component", "2*z + y^2", "--component", "2*(z - x*y) - x^2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["solves"], true);
    let out = run(&["oracle", &pdes, "--nmax", "4", "--json"]);
    assert_eq!(json(&out)["dims_by_degree"], serde_json::json!([2, 3, 5, 5, 5]));
}

#[test]
fn bound_and_check_commands() {
    let v = json(&run(&["bound", "1", "1", "1", "--json"]));
    assert_eq!(v["weyl_dim"], 5);
    let v = json(&run(&["check", "1", "1", "1", "--json"]));
    assert_eq!(v["passed"], true);
}
