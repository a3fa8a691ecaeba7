//! End-to-end tests driving the compiled binary.

use std::process::{Command, Output};

fn hdcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdcalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn hankel_reference_rows_as_csv() {
    let out = hdcalc(&["hankel", "P2", "--n", "11"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,k,H"));
    let values: Vec<&str> = lines.map(|l| l.split(',').nth(2).unwrap()).collect();
    let want = ["1", "1", "-2", "4", "8", "-16", "-32", "-64", "128", "-256", "-1536", "-3072"];
    assert_eq!(values, want);
}

#[test]
fn verify_single_check_as_json() {
    let out = hdcalc(&["verify", "T1.2", "--order", "128", "--format", "json"]);
    assert!(out.status.success(), "exit: {:?}", out.status);
    let reports: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let r = &reports.as_array().unwrap()[0];
    assert_eq!(r["id"], "T1.2");
    assert_eq!(r["order"], 128);
    assert_eq!(r["status"], "pass");
}

#[test]
fn breakdown_exits_with_computation_error() {
    let out = hdcalc(&["jfrac", "1/(1-x)", "--depth", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.contains("Stieltjes breakdown at n=2 (H_2=0)"),
        "stderr: {err}"
    );
}

#[test]
fn missing_required_flag_is_a_usage_error() {
    let out = hdcalc(&["hankel", "P2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_check_id_is_a_usage_error() {
    let out = hdcalc(&["verify", "NOSUCH"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("NOSUCH"), "stderr: {err}");
}

#[test]
fn json_reports_are_stable_modulo_elapsed_time() {
    let run = || {
        let out = hdcalc(&["verify", "REMARK-M4", "--order", "20", "--format", "json"]);
        assert!(out.status.success());
        stdout(&out)
            .lines()
            .filter(|l| !l.contains("elapsed_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(run(), run());
}

#[test]
fn verify_reports_follow_argument_order() {
    let out = hdcalc(&["verify", "SCAN-P2.5R", "REMARK-M4", "--order", "20"]);
    assert!(out.status.success(), "conjectural must not fail the run");
    let text = stdout(&out);
    let ids: Vec<&str> = text.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(ids, ["SCAN-P2.5R", "REMARK-M4"]);
    assert!(text.contains("conjectural"), "scan is reported as conjectural");
}

#[test]
fn list_prints_the_whole_catalog() {
    let out = hdcalc(&["list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 21);
    assert!(text.starts_with("T1.1"));
    assert!(text.lines().last().unwrap().starts_with("SCAN-P2.5R"));
}

#[test]
fn expand_writes_series_text_format_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p2.txt");
    let out = hdcalc(&["expand", "P2", "--order", "6", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "", "file output leaves stdout empty");
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, "# ring=Q order=6\n1\n-1\n-1\n1\n-1\n1\n1\n");
}

#[test]
fn guess_finds_the_catalan_quadratic() {
    let out = hdcalc(&["guess", "(1-sqrt(1-4*x))/(2*x)", "--dx", "2", "--df", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("x*f^2-f+1"));
}

#[test]
fn residue_jfrac_reports_conjectured_periods_in_star_notation() {
    let out = hdcalc(&[
        "jfrac", "TM27", "--depth", "12", "--mod", "3", "--detect-period", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["u_period_conjectural"], "((1)^*)");
    assert_eq!(v["v_period_conjectural"], "(1, 1, (2)^*)");
}
