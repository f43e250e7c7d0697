use std::process::{Command, Output};

use serde_json::Value;

fn nct(args: &[&str], dir: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nct")).args(args).current_dir(dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn results_go_to_stdout_and_errors_to_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let ok = nct(&["cf", "sqrt(2)"], dir.path());
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "[1; (2)]\n");
    assert!(ok.stderr.is_empty());

    let domain = nct(&["cone", "1/2", "1", "0"], dir.path());
    assert_eq!(domain.status.code(), Some(1));
    assert!(domain.stdout.is_empty());
    assert!(String::from_utf8_lossy(&domain.stderr).starts_with("error[NotIrrational]"));

    let parse = nct(&["cf", "sqrt(2"], dir.path());
    assert_eq!(parse.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse.stderr).starts_with("error[ParseError]"));

    let usage = nct(&["height"], dir.path());
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn json_envelopes() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], i32, bool); 5] = [
        (&["--json", "height", "S", "--base", "2i"], 0, true),
        (&["--json", "equiv-theta", "sqrt(2)", "(3+sqrt(2))/7"], 0, true),
        (&["--json", "act", "S", "sqrt(2)", "0", "--base", "2i"], 0, true),
        (&["--json", "convergents", "[1; 2, 3]", "-n", "5"], 1, false),
        (&["--json", "nonsense"], 2, false),
    ];
    for (args, code, ok) in cases {
        let out = nct(args, dir.path());
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        let text = if code == 0 { stdout(&out) } else { String::from_utf8(out.stderr).unwrap() };
        let v: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{args:?}: {e}: {text}"));
        assert_eq!(v["ok"], ok, "{args:?}");
        assert_eq!(v["error"].is_null(), ok, "{args:?}");
    }
    let v: Value = serde_json::from_str(&stdout(&nct(&["--json", "height", "S", "--base", "2i"], dir.path()))).unwrap();
    assert_eq!(v["result"]["height"], 1);
    let v: Value = serde_json::from_str(&stdout(&nct(&["--json", "equiv-theta", "sqrt(2)", "(3+sqrt(2))/7"], dir.path()))).unwrap();
    assert_eq!(v["result"]["witness"], "[[2,3],[3,5]]");
}

#[test]
fn render_writes_identical_svgs() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["render", "--viewport", "-3/2", "3/2", "2", "--segment", "[[2,1],[1,1]]", "1/7 + 3/2 i", "-o"];
    let a = nct(&[&args[..], &["a.svg"]].concat(), dir.path());
    let b = nct(&[&args[..], &["b.svg"]].concat(), dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let svg_a = std::fs::read_to_string(dir.path().join("a.svg")).unwrap();
    let svg_b = std::fs::read_to_string(dir.path().join("b.svg")).unwrap();
    assert_eq!(svg_a, svg_b);
    assert!(svg_a.starts_with("<svg") || svg_a.starts_with("<?xml"));
    assert!(svg_a.contains("<metadata"));

    let bad = nct(&["render", "--viewport", "1", "-1", "2", "-o", "c.svg"], dir.path());
    assert_eq!(bad.status.code(), Some(2));
    assert!(!dir.path().join("c.svg").exists());
}

#[test]
fn verify_reports_by_suite() {
    let dir = tempfile::tempdir().unwrap();
    let out = nct(&["verify", "--suite", "moduli", "--seed", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).starts_with("suite moduli (seed 3): "));
    let unknown = nct(&["verify", "--suite", "nope"], dir.path());
    assert_eq!(unknown.status.code(), Some(1));
}
