//! Smoke tests for the command-line binary.

use std::fs;
use std::process::Command;

fn besmub(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_besmub")).args(args).output().expect("binary runs")
}

#[test]
fn graph_exports_dimacs() {
    let dir = tempfile::tempdir().unwrap();
    let dimacs = dir.path().join("g3.dimacs");
    let table = dir.path().join("g3.json");
    let out = besmub(&[
        "graph",
        "--p",
        "3",
        "--out",
        dimacs.to_str().unwrap(),
        "--vertex-table",
        table.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&dimacs).unwrap();
    assert!(text.contains("p edge 24 180"));
    let parsed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&table).unwrap()).unwrap();
    assert_eq!(parsed["p"], 3);
    assert_eq!(parsed["vertices"].as_array().unwrap().len(), 24);
}

#[test]
fn find_and_verify_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = besmub(&["find", "--p", "5", "--mode", "subgroup", "--out", cert.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = besmub(&["verify", cert.to_str().unwrap(), "--oracle", "--observables"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("graph check: pass"));
    assert!(stdout.contains("oracle check: pass"));
}

#[test]
fn verify_flags_corrupted_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("bad.json");
    // members with trace(Fi^-1 Fj) = 2: identity and a transvection
    fs::write(
        &cert,
        r#"{"p":3,"provenance":"imported","members":[[[1,0],[0,1]],[[1,0],[1,1]]],"verified_graph":false,"verified_oracle":false}"#,
    )
    .unwrap();
    let out = besmub(&["verify", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn spectrum_matches_closed_form() {
    let out = besmub(&["spectrum", "--p", "3", "--complement"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("matches closed form: yes"));
    assert!(stdout.contains("complement spectrum: pass"));
}

#[test]
fn partition_covers_group() {
    let out = besmub(&["partition", "--p", "5"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("disjoint cover: yes"));
}

#[test]
fn constructive_find_with_params() {
    let out = besmub(&["find", "--p", "7", "--mode", "constructive"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("size 42"));
}

#[test]
fn observables_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    besmub(&["find", "--p", "3", "--mode", "subgroup", "--out", cert.to_str().unwrap()]);
    let out = besmub(&["observables", cert.to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("alpha,beta,gamma,delta,g,g_prime"));
    assert_eq!(stdout.lines().count(), 9);
}

#[test]
fn reconstruct_identity_table() {
    // probabilities of W = I: every outcome has probability 1
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("cert.json");
    besmub(&["find", "--p", "3", "--mode", "subgroup", "--out", cert_path.to_str().unwrap()]);
    let cert: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&cert_path).unwrap()).unwrap();
    let identity: Vec<Vec<[f64; 2]>> = (0..9)
        .map(|i| (0..9).map(|j| [if i == j { 1.0 } else { 0.0 }, 0.0]).collect())
        .collect();
    let table = serde_json::json!({
        "p": 3,
        "bases": cert["members"],
        "probs": vec![vec![1.0f64; 9]; 8],
        "reference": identity,
    });
    let prob_path = dir.path().join("probs.json");
    fs::write(&prob_path, table.to_string()).unwrap();
    let out = besmub(&["reconstruct", prob_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("Frobenius error"));
}

#[test]
fn usage_error_exit_code() {
    let out = besmub(&["find", "--p", "4", "--mode", "subgroup"]);
    assert_eq!(out.status.code(), Some(2));
}
