use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect()
}

fn rtc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rtc")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn synthesize_writes_a_controller_that_verify_accepts() {
    let dir = tempfile::tempdir().unwrap();
    let (m, dot, mplus) = (dir.path().join("m.rtc"), dir.path().join("m.dot"), dir.path().join("mplus.rtc"));
    let problem = fixture("uav_rtc.rtc");
    let out = rtc(&["synthesize", path(&problem), "--out", path(&m), "--dot", path(&dot), "--emit-mplus", path(&mplus)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["realizable"], true);
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));
    assert!(std::fs::read_to_string(&mplus).unwrap().contains("yieldC"));

    let out = rtc(&["verify", path(&problem), path(&m)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn rtc_controller_fails_standard_legality() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.rtc");
    let problem = fixture("uav_rtc.rtc");
    assert_eq!(rtc(&["synthesize", path(&problem), "--out", path(&m)]).status.code(), Some(0));
    let out = rtc(&["verify", path(&problem), path(&m), "--mode", "standard"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["result"]["legality"]["verdict"], false);
    assert!(!report["result"]["legality"]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn unrealizable_problem_exits_one() {
    let out = rtc(&["synthesize", path(&fixture("uav_standard.rtc"))]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["realizable"], false);
    assert!(report["counterexample"].is_object());
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.rtc");
    std::fs::write(&bad, "dlts E\n  trans a x b\nend\nfluent F = <{y},{},false>\n").unwrap();
    let out = rtc(&["synthesize", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    assert_eq!(rtc(&["synthesize", path(&dir.path().join("missing.rtc"))]).status.code(), Some(2));
    assert_eq!(rtc(&["verify", path(&fixture("uav_rtc.rtc")), path(&bad)]).status.code(), Some(2));
}

#[test]
fn transform_output_is_a_solvable_standard_problem() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.rtc");
    assert_eq!(rtc(&["transform", path(&fixture("uav_rtc.rtc")), "--out", path(&t)]).status.code(), Some(0));
    let text = std::fs::read_to_string(&t).unwrap();
    assert!(text.starts_with("mode: standard"));
    assert!(text.contains("yieldE"));
    let out = rtc(&["synthesize", path(&t)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["mode"], "standard");
}

#[test]
fn dot_export_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.dot"), dir.path().join("b.dot"));
    for p in [&a, &b] {
        rtc(&["synthesize", path(&fixture("uav_capped.rtc")), "--dot", path(p)]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
