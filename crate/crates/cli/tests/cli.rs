use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn whistle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_whistle")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn plan_then_verify(plan: &[&str], dir: &Path, format: &str) -> Value {
    let out_dir = dir.to_str().unwrap();
    let mut args = plan.to_vec();
    args.extend(["--out", out_dir, "--format", format]);
    let planned = whistle(&args);
    assert!(planned.status.success(), "{}", String::from_utf8_lossy(&planned.stderr));
    let spec = dir.join("spec.json");
    let artifact = if format == "csv" { dir.join("matrix.csv") } else { dir.join("scheme.json") };
    let flag = if format == "csv" { "--matrix" } else { "--scheme" };
    let verified = whistle(&["verify", "--spec", spec.to_str().unwrap(), flag, artifact.to_str().unwrap()]);
    assert_eq!(verified.status.code(), Some(0), "{}", String::from_utf8_lossy(&verified.stdout));
    json_of(&verified)
}

#[test]
fn plans_round_trip_through_verify() {
    let tmp = tempfile::tempdir().unwrap();
    let spec_file = tmp.path().join("problem.json");
    std::fs::write(&spec_file, r#"{"classes":[{"time":"1","count":3},{"time":"2","count":4},{"time":"4","count":1}]}"#)
        .unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["plan", "--strategy", "euclid", "--r1", "8", "--r2", "5"],
        vec!["plan", "--strategy", "euclid", "--r1", "8", "--r2", "5", "--agent-order", "type2-first"],
        vec!["plan", "--strategy", "euclid", "--r1", "9", "--r2", "6", "--reduce-gcd", "--T", "1/3"],
        vec!["plan", "--strategy", "cyclic", "--r1", "4", "--r2", "3", "--T", "5/2"],
        vec!["plan", "--strategy", "cyclic", "--spec", spec_file.to_str().unwrap()],
        vec!["plan", "--strategy", "cyclic", "--spec", spec_file.to_str().unwrap(), "--reduce-gcd"],
    ];
    for (i, case) in cases.iter().enumerate() {
        for format in ["csv", "json"] {
            let dir = tmp.path().join(format!("case{i}-{format}"));
            let report = plan_then_verify(case, &dir, format);
            assert_eq!(report["optimal"], Value::Bool(true), "{case:?}");
        }
    }
}

#[test]
fn euclid_summary() {
    let out = whistle(&["plan", "--strategy", "euclid", "--r1", "180", "--r2", "53"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["halts"], 17);
    assert_eq!(v["H"], "466/413");
    assert_eq!(v["check"]["optimal"], true);
    assert_eq!(v["check"]["k_uniform"], true);
}

#[test]
fn output_is_deterministic() {
    let args = ["plan", "--strategy", "euclid", "--r1", "21", "--r2", "13"];
    assert_eq!(whistle(&args).stdout, whistle(&args).stdout);
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        let mut full = args.to_vec();
        full.extend(["--out", dir.to_str().unwrap()]);
        assert!(whistle(&full).status.success());
    }
    for name in ["spec.json", "matrix.csv", "types.csv", "summary.json"] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn binary_types_file() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("f5");
    let out = whistle(&[
        "plan",
        "--strategy",
        "euclid",
        "--r1",
        "8",
        "--r2",
        "5",
        "--agent-order",
        "type2-first",
        "--binary-zero",
        "1",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let types = std::fs::read_to_string(dir.join("types.csv")).unwrap();
    let lines: Vec<&str> = types.lines().collect();
    assert_eq!(lines[1], "1,0,0,0,0,0,1,1,1,1,1,1,1,1");
    assert_eq!(lines[8], "8,1,1,1,1,1,0,0,0,1,1,0,0,1");
}

#[test]
fn partition_reports_splits() {
    let v = json_of(&whistle(&["partition", "--list", "2,3,4,5,6,7,9,10,12,14,15"]));
    assert_eq!(v["split_count"], 2);
    assert_eq!(v["mean"], "315/58");
    let v = json_of(&whistle(&["partition", "--list", "3,6,4"]));
    assert_eq!(v["splits"][0], serde_json::json!([["3", "6"], ["4"]]));
    assert_eq!(v["irreducible"], serde_json::json!([["3", "6"], ["4"]]));
}

#[test]
fn timing_table() {
    let v = json_of(&whistle(&["timing", "--r1", "8", "--r2", "5", "--T", "2", "--epsilon", "0.005"]));
    assert_eq!(v["H_decimal"], "1.2381");
    assert_eq!(v["cyclic"]["total_decimal"], "1.3031");
    assert_eq!(v["euclid"]["total_decimal"], "1.2681");
    assert_eq!(v["cyclic"]["excess_percent_decimal"], "5.3");
    assert_eq!(v["euclid"]["excess_percent_decimal"], "2.4");
    let v = json_of(&whistle(&["timing", "--r1", "8", "--r2", "5", "--epsilon", "0", "--strategy", "cyclic"]));
    assert!(v.get("euclid").is_none());
    assert_eq!(v["cyclic"]["total"], v["H"]);
}

#[test]
fn verify_flags_bad_schemes() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = tmp.path().join("spec.json");
    std::fs::write(&spec, r#"{"classes":[{"time":"1","count":1},{"time":"2","count":1}]}"#).unwrap();
    let scheme = tmp.path().join("early.json");
    std::fs::write(
        &scheme,
        r#"{"objects":[
            [{"agent":1,"start":"0","end":"1/2"},{"agent":2,"start":"1/2","end":"3/2"}],
            [{"agent":2,"start":"0","end":"1/2"},{"agent":1,"start":"1/2","end":"5/4"}]]}"#,
    )
    .unwrap();
    let out = whistle(&["verify", "--spec", spec.to_str().unwrap(), "--scheme", scheme.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["simultaneous_finish"], false);
    assert_eq!(v["optimal"], false);
}

#[test]
fn usage_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.csv");
    std::fs::write(&bad, "au_hours,1\n1,1,2\n2,1,2\n").unwrap();
    let spec = tmp.path().join("spec.json");
    std::fs::write(&spec, r#"{"classes":[{"time":"1","count":1},{"time":"2","count":1}]}"#).unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["plan", "--strategy", "euclid", "--r1", "5", "--r2", "8"],
        vec!["plan", "--strategy", "euclid", "--r1", "6", "--r2", "4"],
        vec!["plan", "--strategy", "euclid", "--r1", "8", "--r2", "5", "--T", "1"],
        vec!["plan", "--strategy", "euclid"],
        vec!["plan", "--strategy", "bogus"],
        vec!["partition", "--list", "1,x"],
        vec!["partition", "--list", "1,2,3", "--bound", "2"],
        vec!["timing", "--r1", "8", "--r2", "5", "--epsilon", "-1"],
        vec!["fib", "--p", "1"],
        vec!["halt-stats", "--n", "2"],
        vec!["verify", "--spec", "/does/not/exist", "--matrix", "/nope"],
    ];
    for case in &cases {
        assert_eq!(whistle(case).status.code(), Some(2), "{case:?}");
    }
    let out = whistle(&["verify", "--spec", spec.to_str().unwrap(), "--matrix", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn version_flag() {
    let out = whistle(&["--version"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("whistle "));
}
