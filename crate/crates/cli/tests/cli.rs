use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn agclone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agclone"))
        .args(args)
        .env_remove("AGCLONE_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn list_names_every_scenario() {
    let out = agclone(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 10);
    for i in 1..=10 {
        assert!(text.lines().any(|l| l.starts_with(&format!("S{i} "))), "S{i} missing");
    }
}

#[test]
fn verify_confirms_with_exit_zero() {
    let out = agclone(&["verify", "S1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["status"], "confirmed");
    assert_eq!(report["witnesses"][2]["label"], "f(c1, c2)");
    assert_eq!(report["witnesses"][2]["value"], report["witnesses"][1]["value"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("runtime"));

    let text = agclone(&["verify", "counterexample-a3", "--text"]);
    assert_eq!(text.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&text.stdout).starts_with("S1 counterexample-a3: confirmed"));
}

#[test]
fn exact_probability_at_point_six() {
    let out = agclone(&["verify", "S5", "--alpha", "0.6"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["witnesses"][0]["value"][0]["p_nu"], "81/125");
    assert_eq!(report["witnesses"][0]["value"][0]["p_nu_decimal"], "0.648");
}

#[test]
fn reports_are_byte_identical() {
    let a = agclone(&["verify", "S8", "--m", "4", "--seed", "7", "--budget", "500"]);
    let b = agclone(&["verify", "S8", "--m", "4", "--seed", "7", "--budget", "500"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(agclone(&["verify", "S1", "--bogus"]).status.code(), Some(1));
    assert_eq!(agclone(&["verify", "S42"]).status.code(), Some(1));
    assert_eq!(agclone(&["verify", "S1", "--m", "5"]).status.code(), Some(1));
    assert_eq!(agclone(&["verify", "S1", "--json", "--text"]).status.code(), Some(1));
    assert_eq!(agclone(&["--help"]).status.code(), Some(0));
}

#[test]
fn budget_from_environment_and_flag() {
    let starved = Command::new(env!("CARGO_BIN_EXE_agclone"))
        .args(["verify", "S3"])
        .env("AGCLONE_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(starved.status.code(), Some(3));
    assert_eq!(json(&starved)["status"], "inconclusive");

    let flag_wins = Command::new(env!("CARGO_BIN_EXE_agclone"))
        .args(["verify", "S3", "--budget", "100000"])
        .env("AGCLONE_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(flag_wins.status.code(), Some(0));
}

#[test]
fn classify_coalitions() {
    let mu = r#"{"n":3,"members":[[1,2],[2,3],[1,3],[1,2,3]]}"#;
    let out = agclone(&["classify", "--coalition", mu]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["class"], "D2");
    assert_eq!(v["equivalent_rule"], "mu");
    assert_eq!(v["monotone"], true);

    let path = scratch("lambda.json", r#"{"n":3,"members":[[1],[2],[3],[1,2,3]]}"#);
    let out = agclone(&["classify", "--coalition", path.to_str().unwrap()]);
    assert_eq!(json(&out)["class"], "L4");
    assert_eq!(json(&out)["parity_support"], serde_json::json!([1, 2, 3]));

    // {1} and {2,3} are complementary and both listed
    let bad = r#"{"n":3,"members":[[1],[2,3],[1,2,3]]}"#;
    assert_eq!(agclone(&["classify", "--coalition", bad]).status.code(), Some(1));
}

#[test]
fn clone_operations() {
    let mu = scratch("mu.json", r#"{"m":5,"generators":[{"rule":"mu"}]}"#);
    let out = agclone(&["clone", "--generators", mu.to_str().unwrap(), "--op", "closure", "--arity", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["size"], 4);

    let out = agclone(&["clone", "--generators", mu.to_str().unwrap(), "--op", "classify"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["classification"]["kind"], "Dependent");
    assert_eq!(v["classification"]["base"], "D2");

    // Case 2 clones cannot be realized
    let out = agclone(&["clone", "--generators", mu.to_str().unwrap(), "--op", "realize"]);
    assert_eq!(out.status.code(), Some(1));

    let and = scratch("and.json", r#"{"m":5,"generators":[{"lift":{"arity":2,"tt":8}}]}"#);
    let out = agclone(&["clone", "--generators", and.to_str().unwrap(), "--op", "classify"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["classification"]["kind"], "Free");
    assert_eq!(v["classification"]["base"], "A4");
    assert_eq!(v["check"]["size"], 1u64 << 20);

    let out = agclone(&["clone", "--generators", and.to_str().unwrap(), "--op", "realize", "--random", "3", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["targets"].as_array().unwrap().len(), 3);
    assert!(v["targets"].as_array().unwrap().iter().all(|t| t["exact"] == true));

    let out = agclone(&[
        "clone",
        "--generators",
        and.to_str().unwrap(),
        "--op",
        "realize",
        "--target",
        r#"{"patchwork":"A4"}"#,
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = agclone(&["clone", "--generators", and.to_str().unwrap(), "--op", "closure", "--symmetric", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(3));
}
