use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn rsalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsalg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("structured output")
}

#[test]
fn check_builtins() {
    let out = rsalg(&["check", "--builtin", "I2"]);
    assert_eq!(out.status.code(), Some(0));
    let out = rsalg(&["check", "--builtin", "brandt2", "--format", "structured"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["zero"], 5);
    assert_eq!(v["schema"], "rsalg-report/1");
}

#[test]
fn out_of_range_entry_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.table");
    fs::write(&bad, r#"{"n":2,"table":[[0,7],[1,0]],"star":[0,1]}"#).unwrap();
    let out = rsalg(&["check", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("table[0][1]"));
}

#[test]
fn axiom_violations_are_reported_with_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    // constant product: not regular
    fs::write(&path, r#"{"n":2,"table":[[0,0],[0,0]],"star":[0,1]}"#).unwrap();
    let out = rsalg(&["check", "--input", path.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["valid"], false);
    assert!(!v["violations"].as_array().unwrap().is_empty());
    let out = rsalg(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_document_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    fs::write(&path, "{\"n\": 2,\n \"table\": [[0,1],[1,0]\n").unwrap();
    let out = rsalg(&["check", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn unknown_builtin_is_rejected() {
    assert_eq!(rsalg(&["check", "--builtin", "Z7"]).status.code(), Some(2));
    assert_eq!(rsalg(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn construct_writes_requested_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = rsalg(&["construct", "--builtin", "Z2", "--emit", "sr,sa,lambda", "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    let mut names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, vec!["Z2.lambda.json", "Z2.sa.json", "Z2.sr.json"]);
    let sr = rsalg_core::parse_semigroup(&fs::read_to_string(dir.path().join("Z2.sr.json")).unwrap()).unwrap();
    assert_eq!(sr.n(), 3);
    assert_eq!(sr.zero(), Some(2));

    let out = rsalg(&["construct", "--builtin", "semilattice2", "--emit", "sa", "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    let sa: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("semilattice2.sa.json")).unwrap()).unwrap();
    assert_eq!(sa["units"].as_array().unwrap().len(), 2);
}

#[test]
fn empty_emit_list_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = rsalg(&[
        "construct",
        "--builtin",
        "Z2",
        "--emit",
        "",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = rsalg(&["construct", "--builtin", "Z2"]);
    assert_eq!(out.status.code(), Some(2));
}

fn function_file(dir: &tempfile::TempDir, values: &str) -> String {
    let path = dir.path().join("f.json");
    fs::write(&path, format!(r#"{{"carrier":"Z2","values":{values}}}"#)).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn norm_examples() {
    let dir = tempfile::tempdir().unwrap();
    let f = function_file(&dir, "[[1.0,0.0],[1.0,0.0]]");
    let b = json(&rsalg(&[
        "norm",
        "--builtin",
        "Z2",
        "--function",
        &f,
        "--which",
        "b",
        "--format",
        "structured",
    ]));
    assert!((b["report"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    let s = json(&rsalg(&[
        "norm",
        "--builtin",
        "Z2",
        "--function",
        &f,
        "--which",
        "sigma_r",
        "--format",
        "structured",
    ]));
    assert!((s["report"]["value"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(s["report"]["method"], "operator_norm");

    let zero = function_file(&dir, "[[0.0,0.0],[0.0,0.0]]");
    for which in ["b", "sigma_r"] {
        let z = json(&rsalg(&[
            "norm",
            "--builtin",
            "Z2",
            "--function",
            &zero,
            "--which",
            which,
            "--format",
            "structured",
        ]));
        assert_eq!(z["report"]["value"], 0.0);
        assert_eq!(z["report"]["method"], "certified_bounds");
    }
}

#[test]
fn norm_rejects_length_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let f = function_file(&dir, "[[1.0,0.0]]");
    let out = rsalg(&["norm", "--builtin", "Z2", "--function", &f, "--which", "b"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_z3_fails_only_the_plateau_identity() {
    // chi_F . chi_F~ counts factorizations in F . F, so on a group it is a
    // multiple of the indicator rather than the indicator itself.
    let out = rsalg(&["verify", "--builtin", "Z3", "--format", "structured"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let checks = v["semigroups"][0]["checks"].as_array().unwrap();
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, vec!["plateaus"]);
}

#[test]
fn verify_writes_sorted_report_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = rsalg(&[
        "verify",
        "--builtin",
        "all",
        "--seed",
        "3",
        "--format",
        "structured",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let names: Vec<&str> = v["semigroups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(names.len(), 6);
    assert_eq!(v["seed"], 3);
}
