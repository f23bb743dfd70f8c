//! End-to-end checks of the gridcc binary: flag handling, output formats,
//! and the 0/1/2 exit-code contract.

use std::process::{Command, Output};

fn gridcc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridcc")).args(args).output().expect("spawn gridcc")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn color_lambda_single_cell_csv() {
    let out = gridcc(&["color", "--coloring", "lambda", "--p", "4", "--region", "1,1,1,1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,color_id,color"));
    let record = lines.next().unwrap();
    assert!(record.starts_with("1,1,"), "got: {record}");
    assert!(record.ends_with("\"B(0,1)\""), "got: {record}");
}

#[test]
fn color_mu_and_theta_examples() {
    let out = gridcc(&["color", "--coloring", "mu", "--p", "4", "--region", "0,0,1,1"]);
    assert!(stdout(&out).contains("(0,4,0)"));
    let out = gridcc(&["color", "--coloring", "theta", "--p", "3", "--region", "2,3,1,1"]);
    assert!(stdout(&out).contains("(1,3)"));
}

#[test]
fn color_json_parses() {
    let out = gridcc(&[
        "color", "--coloring", "lambda", "--p", "2", "--region", "0,0,3,3", "--format", "json",
    ]);
    assert!(out.status.success());
    let records: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(records.as_array().unwrap().len(), 9);
    assert!(records[0].get("color_id").is_some());
}

#[test]
fn color_rejects_bad_region_and_p() {
    assert_eq!(
        gridcc(&["color", "--coloring", "mu", "--p", "4", "--region", "zap"]).status.code(),
        Some(2)
    );
    assert_eq!(
        gridcc(&["color", "--coloring", "mu", "--p", "0", "--region", "0,0,1,1"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_p1_json_roundtrips() {
    let out = gridcc(&["verify", "--p", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["mode"], "exhaustive");
    assert_eq!(report["p"], 1);
    assert_eq!(report["p_eff"], 2);
    assert!(report["violator"].is_null());
}

#[test]
fn verify_rejects_p_zero() {
    assert_eq!(gridcc(&["verify", "--p", "0"]).status.code(), Some(2));
}

#[test]
fn verify_random_mode_is_seeded() {
    let a = gridcc(&["verify", "--p", "2", "--mode", "random", "--trials", "200", "--json"]);
    let b = gridcc(&["verify", "--p", "2", "--mode", "random", "--trials", "200", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    let (a, b): (serde_json::Value, serde_json::Value) = (
        serde_json::from_str(&stdout(&a)).unwrap(),
        serde_json::from_str(&stdout(&b)).unwrap(),
    );
    assert_eq!(a["violator"], b["violator"]);
    assert_eq!(a["subsets_checked"], 200);
}

#[test]
fn count_matches_formula() {
    let out = gridcc(&["count", "--coloring", "mu", "--p", "4"]);
    let text = stdout(&out);
    assert!(text.contains("colors=110"), "got: {text}");
    assert!(text.contains("bound=128"), "got: {text}");
    let out = gridcc(&["count", "--coloring", "mu", "--p", "2"]);
    assert!(stdout(&out).contains("colors=49"));
    let out = gridcc(&["count", "--coloring", "lambda", "--p", "4"]);
    assert!(stdout(&out).contains("bound=572"));
}

#[test]
fn render_zigzag_rejects_bad_band() {
    assert_eq!(gridcc(&["render", "--figure", "4", "--b", "7"]).status.code(), Some(2));
}

#[test]
fn render_mu_labels_origin() {
    let out = gridcc(&["render", "--figure", "1", "--p", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    // row x=0 printed last; its first token is mu(0,0)
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("0_4^0 "), "got: {last}");
}

#[test]
fn render_writes_pixmap_file() {
    let dir = std::env::temp_dir().join(format!("gridcc-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fig3.ppm");
    let out = gridcc(&[
        "render", "--figure", "3", "--p", "2", "--region", "0,0,8,6", "--format", "pixmap",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let bytes = std::fs::read(&path).unwrap();
    assert!(bytes.starts_with(b"P6\n8 6\n255\n"));
    assert_eq!(bytes.len(), 11 + 8 * 6 * 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn oracle_agreement_run() {
    let out = gridcc(&[
        "oracle", "--width", "4", "--height", "4", "--p", "2", "--coloring", "random:3",
        "--instances", "20",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("20/20 agree"));
}

#[test]
fn oracle_tiny_instance_and_area_cap() {
    let out = gridcc(&["oracle", "--width", "2", "--height", "1", "--p", "1", "--coloring", "random:1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("1/1 agree"));
    let out = gridcc(&["oracle", "--width", "6", "--height", "6", "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flags_exit_2() {
    assert_eq!(gridcc(&["verify", "--p", "2", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(gridcc(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn thread_env_var() {
    let ok = Command::new(env!("CARGO_BIN_EXE_gridcc"))
        .env("GRIDCC_THREADS", "2")
        .args(["verify", "--p", "1"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_gridcc"))
        .env("GRIDCC_THREADS", "zero")
        .args(["verify", "--p", "1"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
