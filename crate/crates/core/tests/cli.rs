//! Exit codes and JSON output of the `torusq` binary on the corpus.

mod common;

use std::process::{Command, Output};

use serde_json::Value;

fn torusq(args: &[&str]) -> Output {
    let dir = common::corpus_dir();
    let args: Vec<String> = args
        .iter()
        .map(|a| if a.ends_with(".json") { dir.join(a).display().to_string() } else { a.to_string() })
        .collect();
    Command::new(env!("CARGO_BIN_EXE_torusq")).args(&args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    torusq(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = torusq(&full);
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn check() {
    assert_eq!(code(&["check", "cp2.json"]), 0);
    let out = torusq(&["check", "bad_vertex.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("v0"));
    let v = json(&["check", "bad_vertex.json"]);
    assert_eq!(v["version"], "1");
    assert_eq!(v["valid"], false);
    assert!(v["unimodularity_failures"].as_array().unwrap().iter().any(|f| f["face"] == "v0"));
}

#[test]
fn malformed_and_missing_input() {
    let dir = tempdir();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"version\": \"1\", \"kind\": ").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_torusq")).args(["check", bad.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    assert_eq!(code(&["check", "no_such_file.json"]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["iso", "cp2.json", "model_identity.json"]), 2);
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("torusq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn classify1d() {
    let v = json(&["classify1d", "oned_interval_basis.json"]);
    assert_eq!(v["family"], "TwoEndsBasis");
    assert_eq!(json(&["classify1d", "oned_halfline.json"])["family"], "HalfOpen");
    assert_eq!(json(&["classify1d", "oned_circle.json"])["family"], "FreeCircle");
    let v = json(&["classify1d", "oned_interval_lens.json"]);
    assert_eq!((v["family"].as_str(), v["k"].as_str(), v["w"].as_str()), (Some("TwoEndsLens"), Some("2"), Some("1")));
    assert_eq!(code(&["classify1d", "oned_bad_count.json"]), 1);
    assert_eq!(code(&["classify1d", "pair_lens7.json"]), 0);
}

#[test]
fn iso() {
    assert_eq!(code(&["iso", "cp2.json", "cp2_rotated.json"]), 0);
    assert_eq!(code(&["iso", "interval_basis.json", "interval_lens2.json"]), 1);
    assert_eq!(code(&["iso", "interval_basis.json", "interval_lens2.json", "--up-to-aut"]), 1);
    assert_eq!(code(&["iso", "cp2.json", "cp2_sheared.json"]), 1);
    let v = json(&["iso", "cp2.json", "cp2_sheared.json", "--up-to-aut"]);
    assert_eq!(v["isomorphic"], true);
    assert!(v["g"].is_array());
    assert_eq!(code(&["iso", "cp2.json", "hirzebruch1.json", "--up-to-aut"]), 1);
    assert_eq!(code(&["iso", "cp2.json", "bad_vertex.json"]), 1);
}

#[test]
fn iso_with_chern_classes() {
    assert_eq!(code(&["iso", "s3_hopf.json", "lens_bundle2.json"]), 3);
    assert_eq!(code(&["iso", "s3_hopf.json", "s3_hopf.json", "--complex-map", "0,1,2,3"]), 0);
    assert_eq!(code(&["iso", "s3_hopf.json", "lens_bundle2.json", "--complex-map", "0,1,2,3"]), 1);
    // A flip of two vertices reverses orientation; the class changes sign,
    // which the circle automorphism -1 undoes.
    assert_eq!(code(&["iso", "s3_hopf.json", "s3_hopf.json", "--complex-map", "1,0,2,3"]), 1);
    assert_eq!(code(&["iso", "s3_hopf.json", "s3_hopf.json", "--complex-map", "1,0,2,3", "--up-to-aut"]), 0);
    assert_eq!(code(&["iso", "s3_hopf.json", "s3_hopf.json", "--complex-map", "0,0,2,3"]), 2);
}

#[test]
fn cohomology() {
    let v = json(&["cohomology", "tetra_boundary.json"]);
    assert_eq!(v["free_rank"], 2);
    assert_eq!(v["torsion"], serde_json::json!([]));
    assert_eq!(json(&["cohomology", "disk.json"])["free_rank"], 0);
    assert_eq!(json(&["cohomology", "rp2.json"])["torsion"], serde_json::json!(["2"]));
    assert_eq!(code(&["cohomology", "cp2.json"]), 2);
}

#[test]
fn cut_and_roundtrip() {
    let v = json(&["cut", "cube.json"]);
    assert_eq!(v["strata"].as_array().unwrap().len(), 27);
    assert_eq!(v["fixed_points"].as_array().unwrap().len(), 8);
    assert_eq!(json(&["cut", "free_circle.json"])["strata"].as_array().unwrap().len(), 1);
    for f in ["cp2.json", "cube.json", "free_circle.json", "interval_lens2.json", "s3_hopf.json", "simplex3.json"] {
        assert_eq!(code(&["roundtrip", f]), 0, "{f}");
    }
    assert_eq!(code(&["roundtrip", "bad_vertex.json"]), 1);
}

#[test]
fn verify_models() {
    let v = json(&["verify-models", "model_identity.json"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["descent"]["lift_residual"], 0.0);
    assert_eq!(code(&["verify-models", "model_random_2_1_1.json", "--seed", "42"]), 0);
    assert_eq!(code(&["verify-models", "model_corrupt.json"]), 1);
    assert_eq!(code(&["verify-models", "cp2.json"]), 2);
    assert_eq!(code(&["verify-models", "model_identity.json", "--samples", "0"]), 2);
}

#[test]
fn deterministic_given_seed() {
    let a = torusq(&["--json", "verify-models", "model_random_2_1_1.json", "--seed", "5", "--samples", "200"]);
    let b = torusq(&["--json", "verify-models", "model_random_2_1_1.json", "--seed", "5", "--samples", "200"]);
    assert_eq!(a.stdout, b.stdout);
}
