use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn leibniz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leibniz")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn schema(command: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../docs/schemas/{command}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn normalize_prints_left_normed_words() {
    let o = leibniz(&["normalize", "x1(x2 x3)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "x1 x2 x3 - x1 x3 x2");
}

#[test]
fn normalize_over_a_prime_field() {
    let o = leibniz(&["normalize", "x1(x2 x2)", "--p", "3"]);
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn witness_report() {
    let o = leibniz(&["witness", "--p", "3", "--m", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("terms=1024 nonzero=true"), "{}", stdout(&o));
}

#[test]
fn independence_is_triangular() {
    let o = leibniz(&["independence", "--partition", "6,6,4,4,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict=triangular"));
}

#[test]
fn dim_pn_default_identity() {
    let o = leibniz(&["dim-pn", "--n", "5"]);
    assert_eq!(stdout(&o).trim(), "n=5 dim=50");
}

#[test]
fn operator_power_sugar_is_linearized() {
    let o = leibniz(&["dim-pn", "--identity", "xY^2", "--n", "3", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["identities"][0], "x y#1 y#2 + x y#2 y#1");
    assert_eq!(v["dim"], 3);
}

#[test]
fn linearize_renames_copies() {
    let o = leibniz(&["linearize", "x(yy)", "--var", "y"]);
    assert_eq!(stdout(&o).trim(), "x (y#1 y#2) + x (y#2 y#1)");
}

#[test]
fn gens_lists_templates() {
    let o = leibniz(&["gens", "--partition", "2,1"]);
    assert_eq!(stdout(&o), "lambda=(2,1) k=2\ng_1 = Alt[x1 x2] Alt[x3]  terms=2\ng_2 = Alt[x3] Alt[x1 x2]  terms=2\n");
}

#[test]
fn usage_errors_exit_2() {
    for args in [&["bogus"][..], &["witness", "--p", "4"], &["normalize", "x1(x2"], &["gens", "--partition", "1,2"]] {
        let o = leibniz(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let cases: [&[&str]; 3] = [
        &["verify-m", "--p", "3", "--samples", "50", "--seed", "7", "--format", "json"],
        &["verify-hs", "--samples", "50", "--seed", "7"],
        &["independence", "--partition", "4,4,4,3,2,2", "--format", "json"],
    ];
    for args in cases {
        assert_eq!(leibniz(args).stdout, leibniz(args).stdout, "{args:?}");
    }
}

#[test]
fn seed_is_recorded() {
    let o = leibniz(&["verify-hs", "--samples", "5", "--seed", "41", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 41);
    assert!(v["reports"].as_array().unwrap().iter().all(|r| r["seed"] == 41));
}

#[test]
fn json_output_matches_schemas() {
    let cases: [(&str, &[&str]); 9] = [
        ("normalize", &["normalize", "x1(x2 x3)"]),
        ("linearize", &["linearize", "x0(xy)(xy)", "--var", "x"]),
        ("dim-pn", &["dim-pn", "--n", "4"]),
        ("verify-m", &["verify-m", "--p", "2", "--samples", "20"]),
        ("verify-hs", &["verify-hs", "--samples", "20"]),
        ("witness", &["witness", "--p", "2", "--m", "4"]),
        ("witness", &["witness", "--p", "5", "--m", "3", "--show"]),
        ("gens", &["gens", "--partition", "3,1", "--expand"]),
        ("independence", &["independence", "--partition", "2,2,1"]),
    ];
    for (command, args) in cases {
        let mut args = args.to_vec();
        args.extend(["--format", "json"]);
        let o = leibniz(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let instance: Value = serde_json::from_str(&stdout(&o)).unwrap();
        let validator = jsonschema::validator_for(&schema(command)).unwrap();
        let errors: Vec<String> = validator.iter_errors(&instance).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{command}: {errors:?}");
    }
}
