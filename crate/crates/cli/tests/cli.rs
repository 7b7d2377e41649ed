use std::process::{Command, Output};

use serde_json::Value;

fn polystrata(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polystrata"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    polystrata(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    let out = polystrata(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn pol_json_matches_the_documented_shape() {
    let v = json(&["pol", "--lambda", "2", "--n", "4", "--format", "json"]);
    assert_eq!(v["groups"], serde_json::json!([{"degree": 3, "betti": 1, "torsion": []}]));
}

#[test]
fn order_complex_rank_three_example() {
    let v = json(&["order-complex", "--lambda", "1,2,3,5", "--format", "json"]);
    assert_eq!(v["groups"], serde_json::json!([{"degree": 2, "betti": 3, "torsion": []}]));
    assert_eq!(v["backends"], serde_json::json!(["order-complex"]));
}

#[test]
fn hyp_embeds_backends_and_predictions() {
    let v = json(&["hyp", "--lambda", "1,1,2", "--format", "json"]);
    assert_eq!(v["backends"], serde_json::json!(["cells", "order-complex", "delta"]));
    assert_eq!(v["groups"][0]["degree"], 3);
    let hook = &v["predictions"][0];
    assert_eq!(hook["source"], "hook");
    assert_eq!(hook["case"], "n ≡ 0 (mod k)");
    assert_eq!(hook["matches"], true);
    let text = stdout(&["hyp", "--lambda", "1,2,4"]);
    assert!(text.contains("H~_3 = Z"), "{text}");
    assert!(text.contains("distinct parts): S^3, matches"), "{text}");
}

#[test]
fn single_backends_agree() {
    for backend in ["cells", "order-complex", "delta"] {
        let v = json(&["hyp", "--lambda", "1,1,1,3", "--backend", backend, "--format", "json"]);
        assert_eq!(v["groups"], serde_json::json!([{"degree": 3, "betti": 1, "torsion": []}]), "{backend}");
    }
}

#[test]
fn exports_have_the_documented_sizes() {
    let v = json(&["export", "clambda", "--lambda", "2,3", "--format", "json"]);
    assert_eq!(v["elements"].as_array().unwrap().len(), 2);
    let dot = stdout(&["export", "permutahedron", "--t", "3", "--format", "dot"]);
    assert_eq!(dot.matches("[label=").count(), 12);
    assert_eq!(dot.matches("->").count(), 12);
    let v = json(&["export", "iterated", "--n", "3", "--d", "2", "--format", "json"]);
    assert_eq!(v["elements"].as_array().unwrap().len(), 9);
}

#[test]
fn exports_are_deterministic() {
    let cases: [&[&str]; 8] = [
        &["export", "clambda", "--lambda", "1,2,2", "--format", "dot"],
        &["export", "clambda", "--lambda", "1,1,3", "--format", "json"],
        &["export", "delta", "--lambda", "1,2,3", "--format", "json"],
        &["export", "delta", "--lambda", "1,2,3", "--format", "dot"],
        &["export", "closure-poset", "--lambda", "2,3", "--n", "9", "--format", "dot"],
        &["export", "permutahedron", "--t", "4", "--format", "json"],
        &["export", "iterated", "--n", "4", "--d", "2", "--format", "dot"],
        &["export", "iterated", "--lambda", "1,2", "--d", "2", "--include-top", "--format", "json"],
    ];
    for args in cases {
        let a = polystrata(args);
        let b = polystrata(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn figure_one_readings_export() {
    for lambda in ["4", "8"] {
        let dot = stdout(&["export", "closure-poset", "--lambda", lambda, "--n", "16"]);
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains(&format!("label=\"({lambda})")));
    }
}

#[test]
fn exit_code_zero_on_passing_suites() {
    assert_eq!(code(&["verify", "hook", "--n", "3..8", "--k", "2..4"]), 0);
    assert_eq!(code(&["verify", "machine-table"]), 0);
    assert_eq!(code(&["verify", "d-squared", "--l", "1..4", "--n-max", "8"]), 0);
    assert_eq!(code(&["verify", "iterated", "--n", "2..4", "--d", "1..2"]), 0);
    assert_eq!(code(&["verify", "oracles"]), 0);
    assert_eq!(code(&["verify", "backends", "--n-max", "5"]), 0);
    assert_eq!(code(&["verify", "closure-reduction", "--n-max", "5"]), 0);
    assert_eq!(code(&["verify", "resonance-free", "--max-weight", "8"]), 0);
    assert_eq!(code(&["verify", "stabilization", "--lambda", "2", "--lambda", "2,1", "--n-max", "8"]), 0);
}

#[test]
fn exit_code_one_on_mismatch() {
    // (1^3) is free of resonances but C_λ has one element against three orbits
    let out = polystrata(&["verify", "permutahedron-quotient", "--t-max", "3", "--max-weight", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);
    let failing: Vec<&str> = v["cases"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["match"] == false)
        .map(|c| c["input"].as_str().unwrap())
        .collect();
    assert_eq!(failing, vec!["(1^3)"]);
    let out = polystrata(&["verify", "stabilization", "--lambda", "3", "--n-max", "7", "--quiet"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("3→5 first differs in H^1"), "{text}");
}

#[test]
fn exit_code_two_on_invalid_input() {
    let cases: [&[&str]; 14] = [
        &["hyp", "--lambda", "1,0"],
        &["hyp", "--lambda", "a,b"],
        &["hyp", "--lambda", ""],
        &["hyp", "--lambda", "1,2", "--backend", "simplicial"],
        &["hyp", "--lambda", "1,2", "--format", "dot"],
        &["pol", "--lambda", "1", "--n", "4"],
        &["pol", "--lambda", "2", "--n", "40"],
        &["complement", "--lambda", "1", "--n", "1"],
        &["verify", "nope"],
        &["verify", "hook", "--n", "x..3"],
        &["verify", "hook", "--n", "2..99"],
        &["export", "nothing"],
        &["export", "closure-poset", "--lambda", "2"],
        &["normalize", "--poly", "1,-2,1"],
    ];
    for args in cases {
        assert_eq!(code(args), 2, "{args:?}");
    }
    assert_eq!(code(&["pol", "--lambda", "2"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["order-complex", "--lambda", "1,1,1,1,1,2,2", "--budget", "1000"]), 2);
}

#[test]
fn exit_code_three_on_broken_invariants() {
    let out = polystrata(&["pol", "--lambda", "1,1", "--n", "4", "--parity", "literal"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("boundary squared is nonzero"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn diagnostics_go_to_stderr() {
    let out = polystrata(&["hyp", "--lambda", "1,1,1,1,1,2,2", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("order-complex skipped"));
    let quiet = polystrata(&["hyp", "--lambda", "1,1,1,1,1,2,2", "--budget", "10", "--quiet"]);
    assert!(quiet.stderr.is_empty());
    assert_eq!(out.stdout, quiet.stdout);
}

#[test]
fn quiet_verify_prints_only_the_summary() {
    let text = stdout(&["verify", "iterated", "--n", "2..3", "--d", "1", "--quiet"]);
    assert_eq!(text, "iterated: 2 of 2 cases match\n");
}

#[test]
fn csv_outputs() {
    let csv = stdout(&["pol", "--lambda", "2", "--n", "4", "--format", "csv"]);
    assert_eq!(csv, "degree,betti,torsion\n3,1,\n");
    let csv = stdout(&["stabilization", "--lambda", "2", "--n-max", "6", "--format", "csv"]);
    assert!(csv.starts_with("n,degree,betti,torsion\n2,0,1,"), "{csv}");
    let csv = stdout(&["verify", "oracles", "--format", "csv"]);
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn polynomial_commands() {
    let v = json(&["normalize", "--poly", "0,2,1", "--format", "json"]);
    assert_eq!(v["gamma"], -1.0);
    assert_eq!(v["coefficients"][0], -1.0);
    let v = json(&["cell", "--poly", "(x-1)^2 (x-3) (x^2+1)", "--stabilize", "7", "--format", "json"]);
    assert_eq!((v["composition"].as_str(), v["n"].as_u64()), (Some("(2,1)"), Some(7)));
    let text = stdout(&["resonance", "--parts", "1,2,4,7"]);
    assert!(text.contains("1+2+4 = 7"));
}
