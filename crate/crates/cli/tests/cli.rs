use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn stover(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stover"))
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn without_ms(mut v: Value) -> Value {
    for s in v["stages"].as_array_mut().unwrap() {
        s["ms"] = Value::from(0);
    }
    v
}

#[test]
fn missing_dependency_names_prerequisite() {
    let dir = tempfile::tempdir().unwrap();
    let out = stover(dir.path(), &["--stage", "nilq"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("'phi'") || err.contains("'rewrite'"), "{err}");

    // with φ in place the missing piece is the rewrite stage
    assert_eq!(stover(dir.path(), &["--stage", "phi"]).status.code(), Some(0));
    assert_eq!(stover(dir.path(), &["--stage", "subgroups"]).status.code(), Some(0));
    let out = stover(dir.path(), &["--stage", "nilq"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(2));
    assert!(err.contains("'rewrite'"), "{err}");

    let out = stover(dir.path(), &["--stage", "report"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("'rewrite'"));
}

#[test]
fn unknown_stage_and_lock() {
    let dir = tempfile::tempdir().unwrap();
    let out = stover(dir.path(), &["--stage", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown stage"));

    std::fs::write(dir.path().join(".lock"), "1\n").unwrap();
    let out = stover(dir.path(), &["--stage", "phi"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("locked"));
}

#[test]
fn representation_stages_report_and_rerun_identically() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("out.json");

    let out = stover(dir.path(), &["--stage", "chars", "--threads", "2", "--json-out", report_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(v, written);
    for s in v["stages"].as_array().unwrap() {
        for key in ["name", "claim", "expected", "computed", "match", "ms"] {
            assert!(s.get(key).is_some(), "missing {key} in {s}");
        }
    }
    assert_eq!(v["summary"]["failed"], 0);
    assert!(dir.path().join("chartable.json").is_file());

    let first = stover(dir.path(), &["--stage", "kernel"]);
    assert_eq!(first.status.code(), Some(0));
    let kernel = std::fs::read(dir.path().join("kernel.txt")).unwrap();
    std::fs::remove_file(dir.path().join("kernel.txt")).unwrap();
    let second = stover(dir.path(), &["--stage", "kernel"]);
    assert_eq!(without_ms(json(&first)), without_ms(json(&second)));
    assert_eq!(kernel, std::fs::read(dir.path().join("kernel.txt")).unwrap());

    // the quadric stage reports the printed-matrix mismatch and exits 1
    let out = stover(dir.path(), &["--stage", "quadric", "--groebner-pairs", "100000"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let failed: Vec<&str> = v["stages"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["match"] == false)
        .map(|s| s["id"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["quadric.matrix", "quadric.seed_value"]);

    let out = stover(dir.path(), &["--stage", "lagrangian"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["summary"]["passed"], 4);
}

#[test]
fn groebner_cap_is_inconclusive_not_passing() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(stover(dir.path(), &["--stage", "chars"]).status.code(), Some(0));
    assert_eq!(stover(dir.path(), &["--stage", "kernel"]).status.code(), Some(0));
    let out = stover(dir.path(), &["--stage", "quadric", "--groebner-pairs", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(v["summary"]["inconclusive"].as_u64().unwrap() >= 1);
    let row = v["stages"].as_array().unwrap().iter().find(|s| s["id"] == "quadric.no_decomposables").unwrap();
    assert_eq!(row["match"], false);
    assert_eq!(row["inconclusive"], true);
}
