use std::process::{Command, Output};

use serde_json::Value;

fn gvc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gvc"))
        .args(args)
        .env_remove("GVC_ORACLE_BUDGET")
        .output()
        .expect("binary runs")
}

fn schema() -> jsonschema::Validator {
    let text = include_str!("../../../docs/report-schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap()
}

/// Runs with `--json`, checks the exit code and schema conformance.
fn json(args: &[&str], code: i32) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = gvc(&full);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(code), "{args:?}\n{stdout}");
    let v: Value = serde_json::from_str(&stdout).unwrap();
    let errors: Vec<String> = schema().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?}: {errors:?}\n{stdout}");
    v
}

#[test]
fn cohomology_gl3() {
    let v = json(&["cohomology", "GL(3)"], 0);
    let degrees: Vec<&str> = v["generators"].as_array().unwrap().iter().map(|g| g["degree"].as_str().unwrap()).collect();
    assert_eq!(degrees, ["1", "3", "5"]);
    assert_eq!(v["poincare"], serde_json::json!(["1", "1", "0", "1", "1", "1", "1", "0", "1", "1"]));
}

#[test]
fn count_matches_oracle() {
    let v = json(&["count", "GL(2)", "--q", "3", "--check-oracle"], 0);
    assert_eq!(v["count"], "48");
    assert_eq!(v["oracle"]["value"], "48");
    assert_eq!(v["oracle"]["status"], "match");
}

#[test]
fn text_output_is_a_table() {
    let out = gvc(&["count", "GL(2)", "--q", "3", "--check-oracle"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("count       48"), "{text}");
    assert!(text.contains("48 (match)"), "{text}");
}

#[test]
fn trace_dn_zeta() {
    let v = json(&["trace", "GL(2)", "--q", "5"], 0);
    // (1 - 5)(1 - 25)
    assert_eq!(v["trace"], "96");
    let v = json(&["dn", "torus(1)", "--endo", "scalar 1/2", "--n", "3"], 0);
    assert_eq!(v["values"], serde_json::json!(["1/2", "3/4", "7/8"]));
    let v = json(&["zeta", "torus(1)", "--q", "2", "--order", "3"], 0);
    assert_eq!(v["coefficients"], serde_json::json!(["1", "-1", "-1", "-1"]));
}

#[test]
fn abelian_override_from_endo() {
    let v = json(
        &["trace", "ext(torus(1), abelian(1))", "--endo", "block(ab.* : charpoly t^2+3t+5), frobenius(5)"],
        0,
    );
    assert_eq!(v["trace"], "-36");
}

#[test]
fn parse_and_validation_errors_exit_2() {
    let v = json(&["cohomology", "ext(torus(1),"], 2);
    assert_eq!(v["code"], "dsl_cli.SyntaxError");
    assert!(v["message"].as_str().unwrap().contains("line 1, column 14"));
    let v = json(&["cohomology", "simple(C2)"], 2);
    assert_eq!(v["code"], "core_model.RankOutOfRange");
    assert!(v["details"][0].as_str().unwrap().contains("B2"));
    let v = json(&["count", "abelian(1; t^2+t+3)", "--q", "5"], 2);
    assert_eq!(v["code"], "dynamics.BadCharPolyConstantTerm");
    let v = json(&["verify", "hopf", "torus(20)"], 2);
    assert_eq!(v["code"], "hopf_engine.CapExceeded");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(gvc(&["trace", "GL(2)"]).status.code(), Some(2));
    assert_eq!(gvc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(gvc(&["count", "GL(2)"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_gvc"))
        .args(["count", "GL(2)", "--q", "3", "--check-oracle"])
        .env("GVC_ORACLE_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_makes_oracle_unavailable() {
    let out = Command::new(env!("CARGO_BIN_EXE_gvc"))
        .args(["--json", "count", "GL(3)", "--q", "3", "--check-oracle"])
        .env("GVC_ORACLE_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["count"], "11232");
    assert_eq!(v["oracle"]["status"], "unavailable");
}

#[test]
fn verify_suites() {
    let v = json(&["verify", "hopf", "ext(GL(2), abelian(1))"], 0);
    assert_eq!(v["passed"], true);
    let v = json(&["verify", "decomposition", "prod(GL(2), torus(1), Ga(3))"], 0);
    assert_eq!(v["passed"], true);
    let v = json(&["verify", "point-counts"], 0);
    assert_eq!(v["passed"], true);
    assert!(v["items"].as_array().unwrap().len() >= 38);
}

#[test]
fn verify_weyl_degrees() {
    let v = json(&["verify", "weyl-degrees", "--max-order", "20000"], 0);
    let items = v["items"].as_array().unwrap();
    let status = |name: &str| {
        items
            .iter()
            .find(|i| i["name"] == name)
            .unwrap_or_else(|| panic!("{name}"))["status"]
            .clone()
    };
    assert_eq!(status("F4 degrees"), "pass");
    assert_eq!(status("E8 degrees"), "skip");
    assert_eq!(status("E8 roots"), "pass");
}

#[test]
fn expression_from_stdin() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_gvc"))
        .args(["poincare", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"torus(2)\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("1 + 2t + t^2"));
}
