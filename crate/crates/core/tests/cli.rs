//! End-to-end runs of the `homalg` binary.

use std::process::{Command, Output};

fn homalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homalg")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn verify_reports_pass_and_are_reproducible() {
    let a = homalg(&["verify", "1.5.1", "--prime", "101", "--seed", "3"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = homalg(&["verify", "1.5.1", "--prime", "101", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert_eq!(r["exercise"], "1.5.1");
    assert_eq!(r["prime"], 101);
    assert_eq!(r["pass"], true);
    assert!(r.get("runtime_ms").is_none());
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 50);
    assert!(checks.iter().all(|c| c["pass"] == (c["expected"] == c["got"])));
}

#[test]
fn classification_ids_use_small_primes() {
    let r = json(&homalg(&["verify", "1.6.3-counts"]));
    assert_eq!((r["prime"].as_u64(), r["pass"].as_bool()), (Some(2), Some(true)));
    let r = json(&homalg(&["verify", "1.6.3-counts", "--prime", "3"]));
    assert_eq!(r["prime"], 3);
    let names: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["got"].as_str().unwrap()).collect();
    assert_eq!(names, ["6", "6", "5"]);
}

#[test]
fn timing_is_opt_in() {
    let r = json(&homalg(&["verify", "2.4.1", "--timing"]));
    assert!(r["runtime_ms"].is_u64());
    assert_eq!(r["prime"], 2);
}

#[test]
fn unknown_ids_fail_with_the_list() {
    let out = homalg(&["verify", "bogus"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bogus") && err.contains("1.5.1") && err.contains("7.5.1"), "{err}");
}

#[test]
fn emit_quivers_and_tables() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("q.dot");
    let out = homalg(&["emit", "ar-quiver", "--algebra", "lambda1", "--out", dot.to_str().unwrap(), "--format", "dot"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(text.matches(" [label=").count(), 6);
    assert_eq!(text.matches(" -> ").count(), 6);
    let again = dir.path().join("q2.dot");
    homalg(&["emit", "ar-quiver", "--algebra", "lambda1", "--out", again.to_str().unwrap(), "--format", "dot"]);
    assert_eq!(std::fs::read(&dot).unwrap(), std::fs::read(&again).unwrap());

    let table = dir.path().join("ext.json");
    let out = homalg(&["emit", "ext-table", "--algebra", "lambda3", "--out", table.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let t: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&table).unwrap()).unwrap();
    let hit = t["rows"]
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r["src"] == "S1" && r["dst"] == "S3" && r["degree"] == 2 && r["dim"] == 1);
    assert!(hit);

    let tilt = dir.path().join("tilt.json");
    let out = homalg(&["emit", "tilting-report", "--algebra", "lambda1", "--out", tilt.to_str().unwrap(), "--window", "-2,2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let t: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&tilt).unwrap()).unwrap();
    for r in t["reports"].as_array().unwrap() {
        assert_eq!((r["end_dim"].as_u64(), r["iso_found"].as_bool(), r["injective"].as_bool()), (Some(5), Some(true), Some(true)));
    }
}

#[test]
fn emit_rejects_bad_requests() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x");
    let p = path.to_str().unwrap();
    for args in [
        vec!["emit", "ar-quiver", "--algebra", "lambda1", "--out", p, "--format", "table"],
        vec!["emit", "ext-table", "--algebra", "lambda1", "--out", p, "--format", "dot"],
        vec!["emit", "stable-ar-quiver", "--algebra", "lambda1", "--out", p, "--format", "dot"],
        vec!["emit", "ar-quiver", "--algebra", "lambda9", "--out", p],
    ] {
        let out = homalg(&args);
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert!(!path.exists());
    let bad = dir.path().join("missing").join("q.dot");
    let out = homalg(&["emit", "ar-quiver", "--algebra", "lambda1", "--out", bad.to_str().unwrap(), "--format", "dot"]);
    assert!(!out.status.success());
}
