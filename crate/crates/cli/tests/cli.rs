use std::process::Command;

use lucaslp_cli::{run_cli_with, EXIT_FOUND, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["lucaslp"];
    argv.extend_from_slice(args);
    let code = run_cli_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, _) = run(args);
    (code, serde_json::from_str(&out).expect("json output"))
}

fn binary(args: &[&str], threads: &str) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lucaslp"))
        .args(args)
        .env("LUCASLP_THREADS", threads)
        .output()
        .unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn lp_check_reports_counterexample() {
    let (code, v) = json(&["lp-check", "fib-affine", "--a", "1", "--b", "1", "--prime", "2", "--digits", "3"]);
    assert_eq!(code, EXIT_FOUND);
    let verdict = &v["verdicts"][0];
    assert_eq!(verdict["holds"], false);
    assert_eq!(verdict["prime"], 2);
    assert_eq!(verdict["digit_bound"], 3);
    assert_eq!(verdict["counterexample"], serde_json::json!({"n": 2, "lhs": 0, "digits": [0, 1], "rhs": 1}));
}

#[test]
fn lp_check_holding_sequence_omits_counterexample() {
    let (code, v) = json(&["lp-check", "fib-affine", "--a", "5", "--b", "1", "--prime", "5"]);
    assert_eq!(code, EXIT_OK);
    let verdict = v["verdicts"][0].as_object().unwrap();
    assert_eq!(verdict["holds"], true);
    assert!(!verdict.contains_key("counterexample"));
}

#[test]
fn lp_check_other_specs() {
    assert_eq!(run(&["lp-check", "power", "--base", "-3", "--prime", "7"]).0, EXIT_OK);
    assert_eq!(run(&["lp-check", "apery", "--prime", "5", "--digits", "2"]).0, EXIT_OK);
    assert_eq!(run(&["lp-check", "general-affine", "--rec", "0,1,2,1", "--a", "4", "--b", "1", "--prime", "3"]).0, EXIT_OK);
    assert_eq!(run(&["lp-check", "general-affine", "--rec", "0,1,2,1", "--a", "2", "--b", "1", "--prime", "3"]).0, EXIT_FOUND);
    assert_eq!(run(&["lp-check", "table", "--values", "1,1,1,1", "--prime", "2", "--digits", "2"]).0, EXIT_OK);
    let (code, _, err) = run(&["lp-check", "table", "--values", "1,2", "--prime", "3", "--digits", "2"]);
    assert_eq!(code, EXIT_USAGE, "short table: {err}");
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &[],
        &["no-such-command"],
        &["lp-check", "fib-affine", "--prime", "9"],
        &["lp-check", "fib-affine", "--a", "0", "--prime", "5"],
        &["lp-check", "fib-affine", "--prime", "5", "--digits", "1"],
        &["period", "--prime", "7", "--rec", "1,2,3"],
        &["theorem", "--which", "4", "--a", "1", "--b", "1", "--prime", "5"],
        &["alpha", "--prime", "5", "--scan-limit", "2"],
    ];
    for args in cases {
        let (code, out, err) = run(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(out.is_empty(), "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run(&["--help"]).0, EXIT_OK);
    assert_eq!(run(&["--version"]).0, EXIT_OK);
}

#[test]
fn identity_sweep_exits_0() {
    let (code, v) = json(&["identity", "--which", "catalan", "--n-max", "200"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["verdicts"][0]["checked"], 201 * 202 / 2);
    let (code, _) = json(&["identity", "--which", "shift", "--n-max", "20", "--rec", "1,-2,3,-1"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn theorem_rows_carry_condition_and_oracle() {
    let (code, v) = json(&["theorem", "--which", "2", "--a", "4", "--b", "7", "--prime", "3", "--reading", "as-stated"]);
    assert_eq!(code, EXIT_FOUND);
    let row = &v["verdicts"][0];
    assert_eq!(row["predicted"], true);
    assert_eq!(row["oracle"], false);
    let (code, v) = json(&["theorem", "--which", "2", "--a", "4", "--b", "7", "--prime", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["verdicts"][0]["predicted"], false);
}

#[test]
fn counterexample_found_and_not_found() {
    let (code, v) = json(&["counterexample", "--a", "2", "--b", "3"]);
    assert_eq!(code, EXIT_FOUND);
    assert_eq!(v["verdicts"][0]["prime"], 2);
    let (code, v) = json(&["counterexample", "--a", "5", "--b", "1", "--prime-bound", "2"]);
    assert_eq!(code, EXIT_FOUND, "{v}");
    let (code, v) = json(&["counterexample", "--a", "3", "--b", "2", "--prime-bound", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["verdicts"][0]["found"], false);
}

#[test]
fn alpha_and_period() {
    let (_, v) = json(&["alpha", "--prime", "7"]);
    assert_eq!(v["verdicts"][0]["alpha"], 8);
    let (_, v) = json(&["period", "--prime", "5", "--rec", "1,3,2,0"]);
    assert_eq!(v["verdicts"][0]["preperiod"], 1);
    assert_eq!(v["verdicts"][0]["period"], 4);
}

#[test]
fn special_values() {
    let (code, v) = json(&["special", "--seq", "apery", "--n", "3"]);
    assert_eq!(code, EXIT_OK);
    let values: Vec<String> = v["verdicts"].as_array().unwrap().iter().map(|r| r["value"].to_string()).collect();
    assert_eq!(values.join(" ").replace('"', ""), "1 5 73 1445");
}

#[test]
fn json_is_byte_identical_across_runs_and_thread_counts() {
    let args = ["crossval", "--which", "1", "--prime-max", "7", "--a-max", "6", "--b-max", "6"];
    let (c1, first) = binary(&args, "1");
    let (c2, second) = binary(&args, "4");
    let (c3, third) = binary(&args, "4");
    assert_eq!((c1, c2, c3), (EXIT_OK, EXIT_OK, EXIT_OK));
    assert_eq!(first, second);
    assert_eq!(second, third);
    assert_eq!(run(&args).1, first);
}

#[test]
fn binary_exit_codes() {
    assert_eq!(binary(&["lp-check", "fib-affine", "--a", "1", "--b", "1", "--prime", "2"], "2").0, EXIT_FOUND);
    assert_eq!(binary(&["lp-check", "fib-affine", "--prime", "4"], "2").0, EXIT_USAGE);
    assert_eq!(binary(&["alpha", "--prime", "11"], "2").0, EXIT_OK);
}

#[test]
fn crossval_csv_has_one_row_per_cell() {
    let (code, out, _) = run(&["--format", "csv", "crossval", "--which", "1", "--prime-max", "5", "--a-max", "3", "--b-max", "3"]);
    assert_eq!(code, EXIT_OK);
    let mut reader = csv::Reader::from_reader(out.as_bytes());
    let headers = reader.headers().unwrap().clone();
    for col in ["a", "b", "prime", "predicted", "oracle", "identically_zero"] {
        assert!(headers.iter().any(|h| h == col), "missing column {col}");
    }
    assert_eq!(reader.records().count(), 3 * 3 * 4);
}

#[test]
fn enumerate_plain_output() {
    let (code, out, _) = run(&["--format", "plain", "enumerate-b", "--family", "fib", "--a", "5", "--prime", "5"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("command: enumerate-b\n"));
    assert!(out.contains("verdicts (20):"));
    assert!(out.contains("modulus=20"));
    assert!(out.contains("valid=[1,2,8,19]"));
}

#[test]
fn lp_verdict_schema() {
    let (_, v) = json(&["lp-check", "lucas-affine", "--a", "1", "--b", "0", "--prime", "3"]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["command", "inputs", "verdicts"]);
    let verdict = v["verdicts"][0].as_object().unwrap();
    for key in ["holds", "prime", "digit_bound"] {
        assert!(verdict.contains_key(key), "{key}");
    }
    if verdict["holds"] == false {
        let c = verdict["counterexample"].as_object().unwrap();
        let mut ck: Vec<&str> = c.keys().map(String::as_str).collect();
        ck.sort();
        assert_eq!(ck, ["digits", "lhs", "n", "rhs"]);
    }
}
