use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asyncpi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn encodes_an_output_with_both_schemes() {
    let o = run(&["encode", "x!y.0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "new #0. (x!#0.0 | #0(#1).(#1!y.0 | 0))");
    let o = run(&["encode", "--scheme", "ht", "x!y.0"]);
    assert_eq!(stdout(&o).trim(), "x(#0).(#0!y.0 | 0)");
}

#[test]
fn reads_the_term_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_asyncpi"))
        .args(["encode", "--scheme", "ht", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"x!y.0\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o).trim(), "x(#0).(#0!y.0 | 0)");
}

#[test]
fn congruence_verdicts_set_the_exit_code() {
    let o = run(&["eq", "x!y.0 | 0", "x!y.0"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "equivalent"));
    let o = run(&["eq", "x!y.0", "x!z.0"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(1), "not equivalent"));
}

#[test]
fn exhausted_searches_exit_with_two() {
    let o = run(&["succeeds", "--max", "3", "!(x!y.0) | !x(z).x!y.0 | a(w).ok"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn success_search_prints_the_trace() {
    let o = run(&["succeeds", "x!y.0 | x(z).ok"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("-> ok"));
}

#[test]
fn usage_errors_exit_with_three() {
    assert_eq!(run(&["encode", "((("]).status.code(), Some(3));
    assert_eq!(run(&["check", "--criteria", "bogus"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_output_is_line_delimited_and_deterministic() {
    let args = ["--json", "check", "--max-nodes", "2", "--names", "x", "--criteria", "completeness"];
    let a = stdout(&run(&args));
    assert_eq!(a, stdout(&run(&args)));
    for line in a.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["criterion"], "completeness");
        assert_eq!(v["outcome"], "Holds");
    }
    assert!(a.lines().any(|l| l.contains("\"scheme\":\"ht\"")));
}

#[test]
fn unmutated_encoding_passes_the_small_corpus() {
    let o = run(&["check", "--criteria", "all", "--scheme", "ht", "--max-nodes", "3", "--names", "xy"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn a_dropped_forwarder_is_reported() {
    let o = run(&[
        "check", "--max-nodes", "3", "--names", "x", "--mutation", "drop-forwarder", "--criteria",
        "completeness",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first violation: x!x.0 | x(z).0"));
}

#[test]
fn generated_corpus_lists_the_smallest_terms() {
    let o = run(&["gen", "--max-nodes", "1", "--names", "x"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines, ["0", "ok", "x!x.0", "x(z).0", "new z. 0", "!0", "0 | 0"]);
}
