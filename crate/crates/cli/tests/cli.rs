use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name).display().to_string()
}

fn hypervar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypervar")).args(args).env_remove("HYPERVAR_MAX_POINTS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_exit_codes() {
    assert_eq!(hypervar(&["validate", &fixture("residue_field.json")]).status.code(), Some(0));
    let bad = hypervar(&["validate", &fixture("noncommuting.json")]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("T1 and T2"), "{}", stdout(&bad));
    assert_eq!(hypervar(&["validate", &fixture("malformed.json")]).status.code(), Some(3));
    assert_eq!(hypervar(&["validate", "/nonexistent/module.json"]).status.code(), Some(3));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(hypervar(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hypervar(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(hypervar(&["--format", "xml", "validate", &fixture("residue_field.json")]).status.code(), Some(2));
    assert_eq!(hypervar(&["support", "--module", &fixture("residue_field.json"), "--point", "1"]).status.code(), Some(2));
}

#[test]
fn betti_json_over_hypersurface() {
    let out = hypervar(&["betti", "--module", &fixture("residue_field.json"), "--coeffs", "1;1", "--max-degree", "6", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["betti"], serde_json::json!([1, 2, 2, 2, 2, 2, 2]));
}

#[test]
fn betti_over_polynomial_ring() {
    let out = hypervar(&["betti", "--module", &fixture("residue_field.json"), "--over", "P", "--max-degree", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "degree,betti\n0,1\n1,2\n2,1\n3,0\n");
}

#[test]
fn support_enumeration_csv() {
    let out = hypervar(&["support", "--module", &fixture("quotient_t1.json"), "--enumerate", "--field-order", "4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("point,member,beta_d,beta_d1,rankC,r"));
    let members: Vec<&str> = lines.filter(|l| l.contains(",true,")).collect();
    assert_eq!(members.len(), 4);
    assert!(members.iter().all(|l| l.contains(",0\",true,")));
}

#[test]
fn support_single_point() {
    let out = hypervar(&["support", "--module", &fixture("quotient_t1.json"), "--point", "0,1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["points"][0]["member"], false);
}

#[test]
fn enumeration_bound_and_force() {
    let args = ["rankvariety", "--module", &fixture("regular_f2.json"), "--enumerate", "--field-order", "4"];
    let limited = Command::new(env!("CARGO_BIN_EXE_hypervar")).args(args).env("HYPERVAR_MAX_POINTS", "3").output().unwrap();
    assert_eq!(limited.status.code(), Some(2));
    let forced = Command::new(env!("CARGO_BIN_EXE_hypervar")).args(args).arg("--force").env("HYPERVAR_MAX_POINTS", "3").output().unwrap();
    assert_eq!(forced.status.code(), Some(0));
    assert_eq!(stdout(&forced).lines().filter(|l| l.ends_with("false")).count(), 1);
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "periodicity", "--seed", "1", "--trials", "25", "--primes", "2", "--format", "json"];
    let a = hypervar(&args);
    let b = hypervar(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["trials"], 25);
}

#[test]
fn example_matrices_json() {
    let out = hypervar(&["example-matrices", "--p", "2", "--exponents", "2,2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["even"], serde_json::json!(["{}", "{1,2}"]));
    assert_eq!(v["A"].as_array().unwrap().len(), 2);
}

#[test]
fn module_written_to_tempdir_loads() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::copy(fixture("monomial_f3.json"), &path).unwrap();
    let out = hypervar(&["validate", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["valid"], true);
}
