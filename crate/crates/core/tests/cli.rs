//! End-to-end checks of the command-line interface.

use std::process::{Command, Output};

fn monoreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monoreg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn version_names_the_record_format() {
    let out = monoreg(&["--version"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("record format v1"));
}

#[test]
fn closure_emits_canonical_json() {
    let out = monoreg(&["closure", "x^2, y^3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), r#"{"n":2,"gens":[[2,0],[1,2],[0,3]]}"#);

    // JSON input is accepted everywhere
    let out = monoreg(&["closure", r#"{"n":2,"gens":[[2,0],[0,3]]}"#]);
    assert_eq!(stdout(&out).trim(), r#"{"n":2,"gens":[[2,0],[1,2],[0,3]]}"#);
}

#[test]
fn closure_certificates_are_exact_fractions() {
    let out = monoreg(&["closure", "x^2, y^2", "--certificate"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains(r#"{"n":2,"gens":[[2,0],[1,1],[0,2]]}"#));
    assert!(text.contains("x*y <- lambda = (1/2, 1/2)"));
}

#[test]
fn delta_and_corners() {
    let out = monoreg(&["delta", "x^2, x*y, y^2"]);
    assert_eq!(stdout(&out).trim(), "2");

    let out = monoreg(&["corners", "x^2, x*y, y^2"]);
    assert_eq!(stdout(&out).trim(), "[[2,0],[0,2]]");
}

#[test]
fn member_and_oracle() {
    let out = monoreg(&["member", "x^2, y^2", "x*y", "--certificate"]);
    let text = stdout(&out);
    assert!(text.contains("member"));
    assert!(text.contains("lambda = (1/2, 1/2)"));

    let out = monoreg(&["member", "x^2, y^3", "x*y"]);
    assert!(stdout(&out).contains("not a member"));

    let out = monoreg(&["oracle", "x^2, y^2", "x*y", "--rmax", "2"]);
    assert!(stdout(&out).contains("member (witnessed within r <= 2)"));

    let out = monoreg(&["oracle", "x^2, y^3", "x*y", "--rmax", "6"]);
    assert!(stdout(&out).contains("no witness"));
}

#[test]
fn betti_and_reg_output() {
    let out = monoreg(&["betti", "x^2, y^3"]);
    let text = stdout(&out);
    assert!(text.contains("i, C, degree, rank"));
    assert!(text.contains("totals: [1, 2, 1]"));
    assert!(text.contains("reg(S/I) = 3, reg(I) = 4"));

    let out = monoreg(&["reg", "x^2, y^3"]);
    let text = stdout(&out);
    assert!(text.contains("reg(I) = 4"));
    assert!(text.contains("pdim(S/I) = 2"));

    // fast path: complete intersection
    let out = monoreg(&["betti", "x^2, y^3", "--fast"]);
    assert!(stdout(&out).contains("totals: [1, 2, 1]"));

    // fast path: stable but not CI
    let out = monoreg(&["betti", "x^2, x*y, y^2", "--fast"]);
    assert!(stdout(&out).contains("Eliahou-Kervaire"));

    // neither applies
    let out = monoreg(&["betti", "x^2*y, y^2*z, x*z^2", "--fast"]);
    assert!(!out.status.success());
}

#[test]
fn betti_over_f2_matches_q_on_golden_example() {
    let q = stdout(&monoreg(&["betti", "x^2, y^3", "--field", "q"]));
    let f2 = stdout(&monoreg(&["betti", "x^2, y^3", "--field", "f2"]));
    assert_eq!(q, f2);
}

#[test]
fn classify_flags_json() {
    let out = monoreg(&["classify", "x^2, y^3"]);
    let text = stdout(&out);
    let flags: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(flags["ci"], true);
    assert_eq!(flags["m_primary"], true);
    assert_eq!(flags["gorenstein"], true);
    assert_eq!(flags["integrally_closed"], false);
    assert_eq!(flags["height"], 2);
    assert_eq!(flags["dim"], 0);
}

#[test]
fn sample_streams_deterministic_json_lines() {
    let a = stdout(&monoreg(&[
        "sample", "--family", "ci", "--seed", "9", "--count", "5", "--n", "3",
    ]));
    let b = stdout(&monoreg(&[
        "sample", "--family", "ci", "--seed", "9", "--count", "5", "--n", "3",
    ]));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 5);
    for line in a.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["gens"].as_array().is_some());
    }
}

#[test]
fn verify_single_ideal() {
    let out = monoreg(&["verify", "x^2, y^3", "--hoa", "2"]);
    assert!(out.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(record["format_version"], 1);
    assert_eq!(record["result"]["reg"], 4);
    assert_eq!(record["result"]["reg_closure"], 3);
    assert_eq!(record["result"]["checks"]["conjecture_reg_le"], true);
    assert_eq!(record["result"]["checks"]["hoa_bounds_m2"], true);
}

#[test]
fn fuzz_and_report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("results.jsonl");
    let out = monoreg(&[
        "fuzz", "--family", "random2", "--count", "8", "--seed", "5", "--n", "2",
        "--max-deg", "5", "--out", path.to_str().unwrap(), "--jobs", "2",
    ]);
    assert!(out.status.success(), "fuzz failed: {}", String::from_utf8_lossy(&out.stderr));
    let data = std::fs::read_to_string(&path).unwrap();
    assert_eq!(data.lines().count(), 8);

    let out = monoreg(&["report", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("random2"));

    let out = monoreg(&["report", path.to_str().unwrap(), "--csv"]);
    let csv = stdout(&out);
    assert!(csv.starts_with("family,count"));
    assert!(csv.contains("random2,8"));
}

#[test]
fn bad_input_exits_with_error() {
    let out = monoreg(&["closure", "w^2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}
