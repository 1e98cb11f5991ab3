use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deepball")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("deepball-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["center", "build", "--p", "5", "--h-deg", "2", "--g", "3"]).status.code(), Some(0));
    // missing --g
    assert_eq!(run(&["center", "build", "--p", "5", "--h-deg", "2"]).status.code(), Some(2));
    // p not prime
    assert_eq!(run(&["field", "info", "--p", "6"]).status.code(), Some(2));
    // zero has no logarithm
    assert_eq!(run(&["dlog", "--p", "5", "--h", "2", "--g", "3", "--target-index", "0"]).status.code(), Some(2));
    let below = run(&["construct", "thm12", "--i", "10", "--c", "1/2"]);
    assert_eq!(below.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&below.stderr).contains("<= q1"));
    assert_eq!(run(&["verify", "--suite", "none"]).status.code(), Some(0));
}

#[test]
fn dlog_transcript_is_verified() {
    let out = run(&["dlog", "--p", "7", "--h", "2", "--g", "5", "--target-index", "11", "--seed", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("== target: true"));
    assert!(text.contains("agree=true"));
}

#[test]
fn records_round_trip_through_checkers() {
    let center = scratch("center.json");
    assert!(run(&["center", "build", "--p", "3", "--ext-deg", "2", "--h-deg", "2", "--g", "4", "--f", "5,2", "--out", center.to_str().unwrap()])
        .status
        .success());
    assert!(run(&["center", "check", "--input", center.to_str().unwrap()]).status.success());

    let rec = scratch("composite.json");
    assert!(run(&["construct", "composite", "--q1", "3", "--m", "2", "--c", "1/2", "--h", "2", "--demo", "--out", rec.to_str().unwrap()])
        .status
        .success());
    assert!(run(&["construct", "check", "--input", rec.to_str().unwrap()]).status.success());

    // tampering with the center is detected
    let json = std::fs::read_to_string(&rec).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let c = v["center"][0].as_u64().unwrap();
    v["center"][0] = serde_json::json!((c + 1) % 81);
    std::fs::write(&rec, v.to_string()).unwrap();
    assert_ne!(run(&["construct", "check", "--input", rec.to_str().unwrap()]).status.code(), Some(0));
}
