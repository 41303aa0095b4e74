use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qlinset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlinset"))
        .args(args)
        .env_remove("QLINSET_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
        .join("cli")
        .join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

#[test]
fn image_reports_size_and_window() {
    let out = qlinset(&["image", "--field", "2,1,5", "1,1,1,1,1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["size"], 17);
    assert_eq!(v["window"], serde_json::json!([17, 31]));

    let v = json(&qlinset(&["image", "--field", "3,1,5", "0,1,0,0,0"]));
    assert_eq!(v["size"], 121);
    assert_eq!(v["window"], serde_json::json!([82, 121]));

    let v = json(&qlinset(&["image", "--field", "2,1,5", "g,0,0,0,0"]));
    assert_eq!(v["strictly_fq_linear"], false);
}

#[test]
fn classify_examples() {
    let v = json(&qlinset(&[
        "classify",
        "--field",
        "2,1,5",
        "1,1,1,1,1",
        "1,g,g^3,g^7,g^15",
    ]));
    assert_eq!(v["outcome"]["kind"], "ScalarConjugate");
    assert!(v["e_relations"]["holds"]
        .as_array()
        .unwrap()
        .iter()
        .all(|b| b == true));

    let v = json(&qlinset(&[
        "classify",
        "--field",
        "2,1,5",
        "0,1,0,0,0",
        "0,0,g^0,0,0",
    ]));
    assert_eq!(v["outcome"]["kind"], "MonomialPair");

    let v = json(&qlinset(&[
        "classify",
        "--field",
        "2,1,5",
        "0,1,0,0,0",
        "1,1,1,1,1",
    ]));
    assert_eq!(v["outcome"]["kind"], "ImagesDiffer");
}

#[test]
fn parse_errors_name_the_position() {
    let out = qlinset(&["image", "--field", "2,1,5", "1,1,x,1,1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("coefficient 2"));
}

#[test]
fn verify_is_deterministic_and_writes_csv() {
    let dir = scratch("determinism");
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    for p in [&a, &b] {
        let out = qlinset(&[
            "verify",
            "--suite",
            "bounds",
            "--field",
            "2,1,3",
            "--seed",
            "7",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let read = |p: &PathBuf| {
        without_timing(serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap())
    };
    let (ra, rb) = (read(&a), read(&b));
    assert_eq!(ra, rb);
    assert_eq!(ra["schema"], "qlinset-report/1");
    assert_eq!(ra["passed"], true);
    let csv = std::fs::read_to_string(a.with_extension("csv")).unwrap();
    assert!(csv.starts_with("size,count,representative\n"));

    let sampled = |seed: &str| {
        let p = dir.join(format!("s{seed}.json"));
        qlinset(&[
            "verify",
            "--suite",
            "adjoint",
            "--field",
            "2,1,4",
            "--samples",
            "50",
            "--seed",
            seed,
            "--out",
            p.to_str().unwrap(),
        ]);
        read(&p)
    };
    assert_eq!(sampled("3"), sampled("3"));
}

#[test]
fn out_dir_comes_from_the_environment() {
    let dir = scratch("env");
    let out = Command::new(env!("CARGO_BIN_EXE_qlinset"))
        .args(["verify", "--suite", "survey-n4"])
        .env("QLINSET_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("survey-n4.json")).unwrap())
            .unwrap();
    assert_eq!(
        v["details"]["observed_sizes"],
        serde_json::json!([9, 11, 13, 15])
    );
    assert!(dir.join("survey-n4.csv").exists());
}

#[test]
fn guards_and_unsupported_fields_exit_nonzero() {
    let out = qlinset(&[
        "verify",
        "--suite",
        "bounds",
        "--field",
        "2,1,7",
        "--exhaustive",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = qlinset(&["survey", "--field", "3,1,7", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(3));
    let out = qlinset(&["verify", "--suite", "new-linset", "--field", "2,1,5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qlinset(&["verify", "--suite", "nonsense"]);
    assert!(!out.status.success());
}

#[test]
fn survey_csv_to_stdout() {
    let out = qlinset(&["survey", "--field", "2,1,3", "--exhaustive"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("size,count,representative"));
    let total: u64 = lines
        .map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 504);
}

#[test]
fn modulus_override_is_reported() {
    let v = json(&qlinset(&[
        "field",
        "--field",
        "2,1,5",
        "--modulus",
        "1,1,1,0,1",
    ]));
    assert_eq!(v["field"], "2^1^5/1,1,1,0,1,1");
    let out = qlinset(&["field", "--field", "2,1,5", "--modulus", "1,1,0,0,0"]);
    assert!(!out.status.success());
}
