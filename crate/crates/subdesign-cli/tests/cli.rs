use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subdesign")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_pseudoregulus_writes_design() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("design.json");
    let out = run(&["construct", "pseudoregulus", "--q", "3", "--m", "2", "--r", "1", "--mus", "1,i+1", "-o", path_str(&file)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = stdout_json(&out);
    assert_eq!(summary["dims"], serde_json::json!([2, 2]));

    let profile = run(&["profile", path_str(&file), "--s", "1"]);
    assert_eq!(profile.status.code(), Some(0));
    assert_eq!(stdout_json(&profile)["a_min"], 1);

    let cutting = run(&["cutting", path_str(&file)]);
    assert_eq!(stdout_json(&cutting)["cutting"], false);
}

#[test]
fn unknown_verb_is_a_usage_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn module_errors_are_json_on_stderr() {
    // 1 and 2 have the same norm over F_3
    let out = run(&["construct", "pseudoregulus", "--q", "3", "--m", "2", "--r", "1", "--mus", "1,2"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["module"], "design");
    assert_eq!(err["error"]["kind"], "NormClash");
    assert_eq!(err["error"]["exit_code"], 1);
}

#[test]
fn emitted_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.json");
    let out = run(&["construct", "field-partition", "--q", "2", "--m", "2", "--k", "3", "-o", path_str(&first)]);
    assert_eq!(out.status.code(), Some(0));
    // enlarging by nothing re-emits the same design
    let second = dir.path().join("b.json");
    let out = run(&["construct", "enlarge", path_str(&first), "--s", "1", "--increments", "0,0,0", "-o", path_str(&second)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());

    let code = dir.path().join("code.json");
    assert_eq!(run(&["code", path_str(&first), "-o", path_str(&code)]).status.code(), Some(0));
    let minimal = run(&["minimal", path_str(&code)]);
    let report = stdout_json(&minimal);
    assert_eq!(report["minimal"], true);
    assert_eq!(report["brute_force_checked"], true);
}

#[test]
fn weights_and_srg_reports() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("d.json");
    let out = run(&["construct", "twisted", "--q", "2", "--m", "2", "--k", "2", "--t", "1", "-o", path_str(&file)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = dir.path().join("enum.csv");
    let w = run(&["weights", path_str(&file), "--enumerator-csv", path_str(&csv)]);
    assert_eq!(w.status.code(), Some(0));
    assert_eq!(stdout_json(&w)["closed_form_checked"], true);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("weight,count\n0,1\n"));

    let dot = dir.path().join("g.dot");
    let s = run(&["srg", path_str(&file), "--verify-graph", "--dot", path_str(&dot)]);
    let params = stdout_json(&s);
    assert_eq!((params["v"].as_str(), params["k"].as_str()), (Some("16"), Some("9")));
    assert_eq!((params["lambda"].as_str(), params["mu"].as_str()), (Some("4"), Some("6")));
    assert_eq!(std::fs::read_to_string(&dot).unwrap().matches("--").count(), 72);
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("d.json");
    run(&["construct", "glued", "--q", "3", "--m", "2", "--k", "4", "--t", "2", "-o", path_str(&file)]);
    let one = run(&["--threads", "1", "classify", path_str(&file)]);
    let four = run(&["--threads", "4", "classify", path_str(&file)]);
    assert_eq!(one.status.code(), Some(0), "{}", String::from_utf8_lossy(&one.stderr));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn strong_cameron_liebler_reports_a() {
    let out = run(&["strong", "cameron-liebler", "--kind", "point-pencil", "--q", "2", "--n", "1", "--k", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = stdout_json(&out);
    assert_eq!(r["a_closed_form"], "8");
    assert_eq!(r["a_swept"], 8);
}
