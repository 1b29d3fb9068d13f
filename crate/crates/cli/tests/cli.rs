use std::fs;

use assert_cmd::Command;
use serde_json::Value;

fn kbraid() -> Command {
    Command::cargo_bin("kbraid").unwrap()
}

fn report(args: &[&str]) -> Value {
    let out = kbraid().args(args).assert().success().get_output().stdout.clone();
    serde_json::from_slice(&out).unwrap()
}

/// Replaces the only nondeterministic field.
fn normalized(text: &[u8]) -> String {
    let mut v: Value = serde_json::from_slice(text).unwrap();
    v["elapsed_us"] = 0.into();
    serde_json::to_string_pretty(&v).unwrap() + "\n"
}

#[test]
fn gnk_reduce_golden() {
    let out = kbraid()
        .args(["gnk", "reduce", "--n", "2", "--k", "2", "a{1,2} a{1,2}"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let golden = r#"{
  "command": "gnk reduce",
  "elapsed_us": 0,
  "parameters": {
    "file": null,
    "k": 2,
    "n": 2,
    "word": "a{1,2} a{1,2}"
  },
  "result": {
    "length": 2,
    "reduced": "e",
    "reduced_length": 0,
    "word": "a{1,2} a{1,2}"
  },
  "schema": 1,
  "tool": "kbraid",
  "version": "0.1.0"
}
"#;
    assert_eq!(normalized(&out), golden);
}

#[test]
fn vssb_phi_golden() {
    let out = kbraid()
        .args(["vssb", "phi", "--n", "4", "c1 a2 v3 C2 b1 C2"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let golden = r#"{
  "command": "vssb phi",
  "elapsed_us": 0,
  "parameters": {
    "n": 4,
    "word": "c1 a2 v3 C2 b1 C2"
  },
  "result": {
    "phi": "a{1,2} a{2,3} a{2,3}",
    "phi_reduced": "a{1,2}",
    "rho": "(1 2)(3 4)",
    "word": "c1 a2 v3 C2 b1 C2"
  },
  "schema": 1,
  "tool": "kbraid",
  "version": "0.1.0"
}
"#;
    assert_eq!(normalized(&out), golden);
}

#[test]
fn reports_round_trip_byte_identically() {
    let cases: [&[&str]; 4] = [
        &["gnk", "parity", "--n", "4", "--k", "2", "a{1,2} a{3,4} a{1,2}"],
        &["biq", "enum", "--m", "2", "--k", "3"],
        &["vssb", "rho", "--n", "3", "c1 v2"],
        &["gnk", "eq", "--n", "3", "--k", "2", "a{1,2} a{1,3} a{2,3}", "a{2,3} a{1,3} a{1,2}"],
    ];
    for args in cases {
        let out = kbraid().args(args).assert().success().get_output().stdout.clone();
        let text = String::from_utf8(out).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text, "{args:?}");
    }
}

#[test]
fn enum_counts() {
    let r = report(&["biq", "enum", "--m", "2", "--k", "3", "--nontrivial"]);
    assert_eq!(r["result"]["count"], 1);
    let r = report(&["biq", "enum", "--m", "3", "--k", "3", "--nontrivial", "--jobs", "2"]);
    assert_eq!(r["result"]["count"], 7);
}

#[test]
fn enum_budget_is_a_usage_error() {
    kbraid()
        .args(["biq", "enum", "--m", "3", "--k", "3", "--budget", "5"])
        .assert()
        .code(2);
}

#[test]
fn eq_verdicts_and_expect() {
    let abcd2 = "a{1,2,3} a{1,2,4} a{1,3,4} a{2,3,4} a{1,2,3} a{1,2,4} a{1,3,4} a{2,3,4}";
    let r = report(&["gnk", "eq", "--n", "4", "--k", "3", abcd2, "e", "--expect", "equal"]);
    assert_eq!(r["result"]["verdict"], "equal");
    assert_eq!(r["result"]["path"].as_array().unwrap().last().unwrap(), "e");

    let out = kbraid()
        .args(["gnk", "eq", "--n", "3", "--k", "2", "a{1,2}", "e", "--expect", "equal"])
        .assert()
        .code(1)
        .get_output()
        .stdout
        .clone();
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["result"]["verdict"], "distinct");
    assert_eq!(v["result"]["witness"]["kind"], "parity");

    kbraid()
        .args(["gnk", "eq", "--n", "3", "--k", "2", "a{1,2}", "e", "--expect", "distinct"])
        .assert()
        .success();
}

#[test]
fn parse_errors_exit_2_with_position() {
    let out = kbraid()
        .args(["gnk", "reduce", "--n", "3", "--k", "2", "a{1,2} a{1,x}"])
        .assert()
        .code(2)
        .get_output()
        .stderr
        .clone();
    let msg = String::from_utf8(out).unwrap();
    assert!(msg.contains("byte 7") && msg.contains("a{1,x}"), "{msg}");

    let out = kbraid()
        .args(["vssb", "phi", "--n", "3", "c1 q2"])
        .assert()
        .code(2)
        .get_output()
        .stderr
        .clone();
    assert!(String::from_utf8(out).unwrap().contains("q2"));

    kbraid().args(["gnk", "frobnicate"]).assert().code(2);
    kbraid()
        .args(["vssb", "verify", "--family", "Q", "--n", "3"])
        .assert()
        .code(2);
}

#[test]
fn word_file_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let word = dir.path().join("w.txt");
    fs::write(&word, "n=3 k=2\na{1,2} a{1,3} a{1,3} a{2,3}\n").unwrap();
    let out = dir.path().join("report.json");
    kbraid()
        .args(["gnk", "reduce", "--file", word.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .assert()
        .success()
        .stdout("");
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["reduced"], "a{1,2} a{2,3}");
}

#[test]
fn make_save_check_and_iso() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    let inv = dir.path().join("inv.json");
    let r = report(&["biq", "make", "gaussian", "--k", "3", "--save", g.to_str().unwrap()]);
    assert_eq!(r["result"]["axioms_passed"], true);
    let r = report(&["biq", "make", "involution", "--m", "2", "--k", "3", "--tau", "0-1", "--save", inv.to_str().unwrap()]);
    assert_eq!(r["result"]["classification"]["tag"], "componentwise-involution");

    let r = report(&["biq", "check", g.to_str().unwrap()]);
    assert_eq!(r["result"]["passed"], true);
    let r = report(&["biq", "iso", g.to_str().unwrap(), inv.to_str().unwrap(), "--expect", "true"]);
    assert_eq!(r["result"]["isomorphic"], true);

    let id = dir.path().join("id.json");
    report(&["biq", "make", "conditional", "--m", "3", "--k", "3", "--tau", "0-1", "--mu", "1", "--save", id.to_str().unwrap()]);
    kbraid()
        .args(["biq", "iso", g.to_str().unwrap(), id.to_str().unwrap(), "--expect", "true"])
        .assert()
        .code(1);
}

#[test]
fn check_reports_failed_axiom() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    // Not involutive: (0,0) -> (1,1) -> (1,1).
    fs::write(&bad, r#"{"k": 2, "m": 2, "table": {"0,0": "1,1", "0,1": "0,1", "1,1": "1,1"}}"#).unwrap();
    let out = kbraid()
        .args(["biq", "check", bad.to_str().unwrap()])
        .assert()
        .code(1)
        .get_output()
        .stdout
        .clone();
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["result"]["passed"], false);
    let failed: Vec<&Value> = v["result"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .collect();
    assert_eq!(failed[0]["axiom"], "involution");
}

#[test]
fn flat_and_swap_make() {
    let r = report(&["biq", "make", "flat", "--m", "2", "--star", "1,1,0,0"]);
    assert_eq!(r["result"]["axioms_passed"], true);
    let r = report(&["biq", "make", "swap", "--m", "3"]);
    assert_eq!(r["result"]["axioms_passed"], true);
    kbraid()
        .args(["biq", "make", "flat", "--m", "2", "--star", "0,1,1,0"])
        .assert()
        .code(2);
}

#[test]
fn coloring_commands() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    report(&["biq", "make", "gaussian", "--k", "2", "--save", g.to_str().unwrap()]);
    let g = g.to_str().unwrap();

    let r = report(&["color", "bind", "--biquandle", g, "--n", "4", "a{1,2}", "--chi1", "0,1,0,1", "--chi2", "0,0,1,1"]);
    assert_eq!(r["result"]["binding_number"], 0);
    assert_eq!(r["result"]["chi_out"], serde_json::json!([1, 0, 0, 1]));
    let r = report(&["color", "bind", "--biquandle", g, "--n", "4", "a{1,2}", "--chi1", "0,1,0,1", "--chi2", "1,0,0,1", "--coloring"]);
    assert_eq!(r["result"]["binding_number"], 1);
    assert!(r["result"]["coloring"]["edges"].is_array());

    let r = report(&["color", "count", "--biquandle", g, "--n", "3", "a{1,2} a{2,3}"]);
    assert_eq!(r["result"]["count"], 8);
    let r = report(&["color", "homs", "--biquandle", g, "--n", "3", "a{1,2} a{2,3}"]);
    assert_eq!(r["result"]["hom_count"], 8);
    assert_eq!(r["result"]["equal"], true);

    kbraid()
        .args(["color", "bind", "--biquandle", g, "--n", "4", "a{1,2}", "--chi1", "0,1,z", "--chi2", "0,0,1,1"])
        .assert()
        .code(2);
}

#[test]
fn vssb_invariant_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    report(&["biq", "make", "gaussian", "--k", "2", "--save", g.to_str().unwrap()]);
    let r = report(&[
        "vssb", "invariant", "--n", "3", "c1 c1 C1 C1", "--biquandle", g.to_str().unwrap(), "--chi1", "0,1,1", "--chi2", "0,1,1",
    ]);
    assert_eq!(r["result"]["binding_number"], 1);

    let r = report(&["vssb", "verify", "--family", "A+V", "--n", "3"]);
    assert_eq!(r["result"]["failures"], 0);
    assert_eq!(r["result"]["family"], "A+V");
}
