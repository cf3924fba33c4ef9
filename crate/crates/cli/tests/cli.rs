use std::io::Write;
use std::process::{Command, Output, Stdio};

fn corpus(name: &str) -> String {
    format!("{}/../../corpus/{name}.icx", env!("CARGO_MANIFEST_DIR"))
}

fn icx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icx")).args(args).env("ICX_THREADS", "2").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn has_line(o: &Output, line: &str) -> bool {
    stdout(o).lines().any(|l| l == line)
}

#[test]
fn check_reports_violations_with_exit_one() {
    let o = icx(&["check", &corpus("exla1")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(has_line(&o, "status: violation"));
    assert!(has_line(&o, "witness_point: (-1/2, 0, 1/2)"));

    let o = icx(&["check", &corpus("rmconjic_g")]);
    assert!(has_line(&o, "witness_extension: 5/4"));
    assert!(has_line(&o, "witness_average: 1"));

    for ok in ["rmconjic_set", "unit-box"] {
        let o = icx(&["check", &corpus(ok)]);
        assert_eq!(o.status.code(), Some(0), "{ok}");
        assert!(has_line(&o, "integrally_convex: true"));
    }
}

#[test]
fn check_kind_override() {
    let o = icx(&["check", "--kind", "set", &corpus("rmconjic_g")]);
    assert!(has_line(&o, "kind: set"));
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn subgrad_with_trace_and_order() {
    let o = icx(&["subgrad", &corpus("rmsubg"), "--at", "0", "0", "0", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(has_line(&o, "p: (0, 1, 0)"));
    let out = stdout(&o);
    let p3 = out.find("  p3:").unwrap();
    let p1 = out.find("  p1:").unwrap();
    assert!(p3 < p1);

    let o = icx(&["subgrad", &corpus("rmsubg"), "--at", "0", "0", "0", "--order", "3,2,1"]);
    assert_eq!(o.status.code(), Some(0));

    let o = icx(&["subgrad", &corpus("square-1d"), "--at", "1"]);
    assert!(has_line(&o, "p: (3)"));
}

#[test]
fn subgrad_on_empty_subdifferential_is_an_error() {
    let o = icx(&["subgrad", &corpus("exla1"), "--at", "0", "0", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(has_line(&o, "error: integral subdifferential is empty"));
    assert!(stdout(&o).contains("proof: "));
}

#[test]
fn biconjugate_gap() {
    let o = icx(&["biconj", &corpus("exla1"), "--at", "0", "0", "0"]);
    assert!(has_line(&o, "value: -1"));
    assert!(has_line(&o, "f: 0"));
    assert!(has_line(&o, "gap: true"));
}

#[test]
fn conjugate_value_and_table() {
    let o = icx(&["conj", &corpus("exla1"), "--at", "0", "0", "0"]);
    assert!(has_line(&o, "value: 1"));
    let o = icx(&["conj", &corpus("rmconjic_set"), "--lo", "1", "1", "1", "2", "--hi", "1", "1", "1", "2"]);
    assert!(has_line(&o, "  1 1 1 2 : 2"));
}

#[test]
fn dc_on_equal_functions() {
    let h = corpus("lnat-pairs");
    let o = icx(&["dc", "--g", &h, "--h", &h]);
    assert_eq!(o.status.code(), Some(0));
    assert!(has_line(&o, "primal: 0"));
    assert!(has_line(&o, "dual: 0"));
}

#[test]
fn hull_of_parallelogram() {
    let o = icx(&["hull", &corpus("rmedgedir")]);
    assert!(has_line(&o, "vertices_integral: true"));
    assert!(has_line(&o, "directions_in_pm1: true"));
    assert!(has_line(&o, "integrally_convex: false"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn minimize_from_corner() {
    let o = icx(&["minimize", &corpus("sep-abs"), "--from", "3", "-3"]);
    assert!(has_line(&o, "point: (0, 0)"));
    assert!(has_line(&o, "certified_global: true"));
}

#[test]
fn gen_output_round_trips_through_stdin() {
    let o = icx(&["gen", "random-ic", "--lo", "0", "0", "--hi", "2", "2", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let again = icx(&["gen", "random-ic", "--lo", "0", "0", "--hi", "2", "2", "--seed", "5"]);
    assert_eq!(o.stdout, again.stdout);

    let mut child = Command::new(env!("CARGO_BIN_EXE_icx"))
        .args(["check", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&o.stdout).unwrap();
    let checked = child.wait_with_output().unwrap();
    assert!(has_line(&checked, "integrally_convex: true"));
}

#[test]
fn corpus_verify_passes() {
    let o = icx(&["corpus-verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(has_line(&o, "failures: 0"));
}

#[test]
fn json_mode_keeps_exact_rationals() {
    let o = icx(&["--json", "check", &corpus("rmconjic_g")]);
    let out = stdout(&o);
    assert!(out.starts_with("{\"status\":\"violation\""));
    assert!(out.contains("\"witness_extension\":\"5/4\""));
}

#[test]
fn errors_exit_two() {
    let o = icx(&["check", "/nonexistent.icx"]);
    assert_eq!(o.status.code(), Some(2));
    let o = icx(&["subgrad", &corpus("rmsubg"), "--at", "0", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("status: error"));
}
