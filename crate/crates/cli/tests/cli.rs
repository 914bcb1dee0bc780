use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn eostrata(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eostrata"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn json_ok(args: &[&str]) -> Value {
    let out = eostrata(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn strata_g1_weights() {
    let rows = json_ok(&["strata", "--g", "1", "--p", "3"]);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let weights: Vec<i64> = rows.iter().map(|r| r["total_weight"].as_i64().unwrap()).collect();
    assert_eq!(weights, vec![8, 2]);
    assert_eq!(rows[0]["w"], serde_json::json!([1, 2]));
    assert_eq!(rows[1]["descendant_count"], 1);
}

#[test]
fn strata_rows_and_order() {
    let rows = json_ok(&["strata", "--g", "2", "--p", "2"]);
    let lengths: Vec<u64> = rows.as_array().unwrap().iter().map(|r| r["length"].as_u64().unwrap()).collect();
    assert_eq!(lengths, vec![0, 1, 2, 3]);
    for p in ["2", "5"] {
        let rows = json_ok(&["strata", "--g", "3", "--p", p]);
        let rows = rows.as_array().unwrap();
        assert_eq!(rows.len(), 8);
        for r in rows {
            let n = r["N"].as_u64().unwrap() as u32;
            let p: i64 = p.parse().unwrap();
            assert_eq!(r["total_weight"].as_i64().unwrap(), p.pow(n) - 1);
            assert!(r["length"].as_u64().unwrap() <= 6);
        }
    }
}

#[test]
fn strata_csv() {
    let out = eostrata(&["strata", "--g", "2", "--p", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "w,length,Jw,sigma,N,total_weight,c,descendant_count");
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[4], "3;4;1;2,3,1,1;2,1,1,1,1");
}

#[test]
fn output_is_deterministic() {
    let a = eostrata(&["strata", "--g", "4", "--p", "3"]);
    let b = eostrata(&["strata", "--g", "4", "--p", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let a = eostrata(&["verify", "--g-max", "2", "--p", "2", "--check", "schubert"]);
    let b = eostrata(&["verify", "--g-max", "2", "--p", "2", "--check", "schubert"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn strata_rejects_bad_input() {
    assert_eq!(eostrata(&["strata", "--g", "2", "--p", "4"]).status.code(), Some(2));
    assert_eq!(eostrata(&["strata", "--g", "0", "--p", "3"]).status.code(), Some(2));
    assert_eq!(eostrata(&["strata", "--g", "x", "--p", "3"]).status.code(), Some(2));
    assert_eq!(eostrata(&["strata", "--g", "2", "--p", "3", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(eostrata(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn classify_fixtures() {
    let ord = json_ok(&["classify", "--module", &fixture("ordinary_g1.json")]);
    assert_eq!(ord["w"], serde_json::json!([2, 1]));
    assert_eq!(ord["J"], serde_json::json!([]));
    let ss = json_ok(&["classify", "--module", &fixture("supersingular_g1.json")]);
    assert_eq!(ss["w"], serde_json::json!([1, 2]));
    assert_eq!(ss["sigma"], serde_json::json!([2, 1]));
    let ss9 = json_ok(&["classify", "--module", &fixture("supersingular_g1_f9.json")]);
    assert_eq!(ss9["w"], serde_json::json!([1, 2]));
}

#[test]
fn classify_errors() {
    let out = eostrata(&["classify", "--module", &fixture("alpha_p.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("ker F ≠ im V"));
    let out = eostrata(&["classify", "--module", &fixture("coordinate_flag_g2.json")]);
    assert_eq!(out.status.code(), Some(2));
    let out = eostrata(&["classify", "--module", &fixture("missing.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn descendants_report() {
    let r = json_ok(&["descendants", "--w", "3,4,1,2", "--j", "1", "--p", "3"]);
    let ds = r["descendants"].as_array().unwrap();
    assert_eq!(ds.len(), 1);
    assert_eq!(ds[0]["v"], serde_json::json!([2, 4, 1, 3]));
    assert_eq!(ds[0]["kind"], serde_json::json!({ "V": 1 }));
    assert!(ds[0]["value"].as_i64().unwrap() > 0);
    let r = json_ok(&["descendants", "--w", "[1,2]", "--j", ""]);
    assert_eq!(r["descendants"], serde_json::json!([]));
    // (s_1, {1}) at g = 2 is not admissible
    let out = eostrata(&["descendants", "--w", "2,1,4,3", "--j", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let out = eostrata(&["descendants", "--w", "2,one", "--j", ""]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn schubert_membership() {
    let lag = fixture("lagrangian_flag_g2.json");
    let coord = fixture("coordinate_flag_g2.json");
    let r = json_ok(&["schubert", "--flag", &lag, "--w", "3,4,1,2", "--j", "1", "--open"]);
    assert_eq!(r["member"], true);
    let r = json_ok(&["schubert", "--flag", &coord, "--w", "3,4,1,2", "--j", "1", "--open"]);
    assert_eq!(r["member"], false);
    let r = json_ok(&["schubert", "--flag", &coord, "--w", "3,4,1,2", "--j", "1", "--closed"]);
    assert_eq!(r["member"], true);
    let r = json_ok(&["schubert", "--flag", &coord, "--w", "1,2,3,4", "--j", "1", "--open"]);
    assert_eq!(r["member"], true);
    let out = eostrata(&["schubert", "--flag", &coord, "--w", "3,4,1,2", "--j", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = eostrata(&["schubert", "--flag", &coord, "--w", "3,4,1,2", "--j", "", "--open"]);
    assert_eq!(out.status.code(), Some(3));
}

fn verify_lines(args: &[&str]) -> (Option<i32>, Vec<Value>) {
    let out = eostrata(args);
    let lines = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    (out.status.code(), lines)
}

#[test]
fn verify_examples() {
    let (code, lines) = verify_lines(&["verify", "--g-max", "3", "--p", "2,3", "--check", "inequality"]);
    assert_eq!(code, Some(0));
    assert_eq!(lines[0]["passed"], true);
    let (code, lines) = verify_lines(&["verify", "--g-max", "4", "--p", "2", "--check", "roundtrip"]);
    assert_eq!(code, Some(0));
    assert_eq!(lines[0]["cases"], 30);
    let (code, lines) = verify_lines(&["verify", "--g-max", "2", "--p", "5", "--check", "weights"]);
    assert_eq!(code, Some(0));
    assert_eq!(lines[0]["check"], "weights");
    let (code, lines) = verify_lines(&["verify", "--g-max", "2", "--p", "2,3"]);
    assert_eq!(code, Some(0));
    assert_eq!(lines.len(), 6);
    assert!(lines.iter().all(|l| l["passed"] == true && l.get("counterexample").is_none()));
}

#[test]
fn verify_rejects_bad_arguments() {
    assert_eq!(eostrata(&["verify", "--g-max", "2", "--check", "everything"]).status.code(), Some(2));
    assert_eq!(eostrata(&["verify", "--g-max", "2", "--p", "2,x"]).status.code(), Some(2));
    assert_eq!(eostrata(&["verify", "--g-max", "9", "--check", "bruhat"]).status.code(), Some(3));
    assert_eq!(eostrata(&["verify", "--g-max", "2", "--p", "6", "--check", "weights"]).status.code(), Some(3));
}
