use std::process::{Command, Output};

use cremona::{CremonaMap, Field, ProjPoint};
use serde_json::Value;

const SIGMA: &str = "[x1*x2:x0*x2:x0*x1]";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cremona")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("structured output")
}

fn code(args: &[&str]) -> Option<i32> {
    run(args).status.code()
}

#[test]
fn sigma_squared_is_identity() {
    let doc = json(&["compose", "--field", "q", "--n", "2", SIGMA, SIGMA]);
    assert_eq!(doc["kind"], "map");
    assert_eq!(doc["n"], 2);
    assert_eq!(doc["field"], "q");
    assert_eq!(doc["payload"]["components"], serde_json::json!(["x0", "x1", "x2"]));
}

#[test]
fn pgl2_over_f4_is_simple() {
    let doc = json(&["pgl2-finite", "--q", "4", "--check", "simple"]);
    assert_eq!(doc["payload"]["order"], 60);
    assert_eq!(doc["payload"]["simple"], true);
    let doc = json(&["pgl2-finite", "--q", "9"]);
    assert_eq!(doc["payload"]["order"], 720);
    assert_eq!(doc["payload"]["pgl_equals_psl"], false);
    assert!(doc["payload"].get("simple").is_none());
}

#[test]
fn connect_identity_to_sigma() {
    let doc = json(&["connect", "--field", "q", "--n", "2", "[x0:x1:x2]", SIGMA, "--samples", "0,1,2"]);
    assert_eq!(doc["kind"], "path");
    let report = &doc["report"];
    assert_eq!(report["all_passed"], true);
    assert_eq!(report["samples"].as_array().unwrap().len(), 3);
    assert!(!doc["payload"]["plan"].as_array().unwrap().is_empty());
    let family = doc["payload"]["family"]["text"].as_str().unwrap();
    let start = json(&["specialize", family, "0"]);
    let end = json(&["specialize", family, "1"]);
    assert_eq!(start["payload"]["components"], serde_json::json!(["x0", "x1", "x2"]));
    let sigma = CremonaMap::parse(Field::Rationals, 2, SIGMA).unwrap();
    let got = CremonaMap::parse(Field::Rationals, 2, end["payload"]["text"].as_str().unwrap()).unwrap();
    assert_eq!(got, sigma);
}

#[test]
fn structured_output_is_deterministic() {
    let args = ["conjlimit", "[x0^2:x0*x1:x0*x2 + x1^2] ;; inverse=[x0^2:x0*x1:x0*x2 - x1^2]", "1:0:0"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn gadget_limit_roundtrips_through_text() {
    let gadget = json(&["gadget", "--lambda", "2"]);
    let g = gadget["payload"]["text"].as_str().unwrap();
    let doc = json(&["conjlimit", g, "0:0:1"]);
    assert_eq!(doc["report"]["all_passed"], true);
    let family = doc["payload"]["family"]["text"].as_str().unwrap();
    let at_zero = json(&["specialize", family, "0"]);
    let expected = CremonaMap::parse(Field::Rationals, 2, "[2*x0 + x1 : x1 : x2]").unwrap();
    let got = CremonaMap::parse(Field::Rationals, 2, at_zero["payload"]["text"].as_str().unwrap()).unwrap();
    assert_eq!(got, expected);
    let at_one = json(&["specialize", family, "1"]);
    assert_eq!(at_one["payload"]["components"], gadget["payload"]["components"]);
}

#[test]
fn evaluation_and_indeterminacy() {
    let doc = json(&["evaluate", SIGMA, "1:2:3"]);
    let p = ProjPoint::parse(Field::Rationals, doc["payload"]["point"].as_str().unwrap()).unwrap();
    assert_eq!(p, ProjPoint::from_i64(Field::Rationals, &[6, 3, 2]).unwrap());
    let doc = json(&["evaluate", SIGMA, "0:0:1"]);
    assert!(doc["payload"]["point"].is_null());
}

#[test]
fn derivative_at_fixed_point() {
    let doc = json(&["derivative", SIGMA, "1:1:1"]);
    assert_eq!(doc["payload"]["fixed"], true);
    assert!(doc["payload"]["fixed_point_derivative"].is_array());
}

#[test]
fn linear_algebra_commands() {
    let doc = json(&["sl-decompose", "2,1;1,1"]);
    assert_eq!(doc["payload"]["length"], 6);
    let doc = json(&["sl-decompose", "--field", "fp:5", "1,2,0;0,1,0;3,1,1"]);
    assert_eq!(doc["payload"]["length"], 14);
    let doc = json(&["det-class", "--n", "2", "2,0,0;0,1,0;0,0,1"]);
    assert_eq!(doc["payload"]["in_psl"], false);
    let doc = json(&["det-class", "8,0,0;0,1,0;0,0,1"]);
    assert_eq!(doc["payload"]["in_psl"], true);
    let doc = json(&["psl-path", "1,0;0,1", "2,1;1,1", "--n", "1"]);
    assert_eq!(doc["report"]["all_passed"], true);
}

#[test]
fn text_format() {
    let out = run(&["pgl2-finite", "--q", "8", "--check", "simple", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("order 504"));
    assert!(text.contains("simple true"));
}

#[test]
fn validation_errors_exit_2() {
    assert_eq!(code(&["gadget", "--field", "fp:8", "--lambda", "2"]), Some(2));
    assert_eq!(code(&["compose", "[x0:x1]", SIGMA]), Some(2));
    assert_eq!(code(&["compose", "[x0:x1:x2", SIGMA]), Some(2));
    assert_eq!(code(&["connect", "--field", "fp:7", "[x0:x1:x2]", SIGMA]), Some(2));
    assert_eq!(code(&["conjlimit", SIGMA, "1:2:3"]), Some(2));
    assert_eq!(code(&["compose", "[x0^2:x1^2:x2^2] ;; inverse=[x0:x1:x2]", SIGMA]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
}

#[test]
fn computational_failures_exit_3() {
    let out = run(&["verify", "[x0^2:x1^2:x2^2]"]);
    assert_eq!(out.status.code(), Some(3));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["report"]["certified"], false);
    assert_eq!(code(&["specialize", "[x0 : t*x1 : x2] ;; inverse=[t*x0 : x1 : t*x2]", "0"]), Some(3));
}

#[test]
fn verify_accepts_inferred_inverses() {
    assert_eq!(json(&["verify", SIGMA])["report"]["certified"], true);
    assert_eq!(json(&["verify", "[x0 + x1 : x1 : 2*x2]"])["report"]["certified"], true);
}
