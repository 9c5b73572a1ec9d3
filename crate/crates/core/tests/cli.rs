//! End-to-end runs of the `twosub` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use twosub::cli::selftest::reference_config;
use twosub::cli::ConfigFile;

fn config_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/reference.json")
}

fn twosub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twosub")).args(args).output().expect("binary runs")
}

fn classify(extra: &[&str], a: &str, b: &str) -> Output {
    let cfg = config_path();
    let mut args = vec!["classify", cfg.to_str().unwrap(), a, b];
    args.extend_from_slice(extra);
    twosub(&args)
}

fn strip_timing(stdout: &[u8]) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(stdout).expect("json output");
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn shipped_config_matches_builtin() {
    let shipped = ConfigFile::load(&config_path()).unwrap();
    assert_eq!(shipped.to_json(), reference_config().to_json());
}

#[test]
fn decided_verdict_exits_zero() {
    let out = classify(&[], "n2", "const-2");
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("boundedly isomorphic [R4]"), "{text}");
}

#[test]
fn undecided_verdict_exits_two() {
    let out = classify(&["--budget-K", "4"], "n2-plus-inv-n2", "n3-plus-inv-n3");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn errors_exit_one() {
    assert_eq!(classify(&[], "inv-n", "no-such-id").status.code(), Some(1));
    assert_eq!(twosub(&["classify", "/nonexistent.json", "a", "b"]).status.code(), Some(1));
    assert_eq!(twosub(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(classify(&["--relation", "unitary"], "inv-n", "inv-n2").status.code(), Some(1));
}

#[test]
fn json_output_is_deterministic() {
    let a = classify(&["--json"], "n2-plus-inv-n2", "n3-plus-inv-n3");
    let b = classify(&["--json"], "n2-plus-inv-n2", "n3-plus-inv-n3");
    assert_eq!(a.status.code(), Some(0));
    let va = strip_timing(&a.stdout);
    assert_eq!(va, strip_timing(&b.stdout));
    assert_eq!(va["verdicts"][0]["rule_id"], "R7");
}

#[test]
fn algebraic_relation_flag() {
    let out = classify(&["--relation", "algebraic", "--json"], "inv-n", "inv-n2");
    assert_eq!(out.status.code(), Some(0));
    let v = strip_timing(&out.stdout);
    assert_eq!(v["verdicts"][0]["rule_id"], "A3");
}

#[test]
fn invariants_and_mu_csv() {
    let cfg = config_path();
    let cfg = cfg.to_str().unwrap();
    let out = twosub(&["invariants", cfg, "shift-inv-n", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = strip_timing(&out.stdout);
    assert_eq!(v["invariants"]["cokernel_dim"], "1");

    let out = twosub(&["mu-csv", cfg, "inv-n", "3", "--against", "inv-n2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,mu,mu_other,ratio");
    assert_eq!(lines[2], "2,0.5,0.25,2");
}

#[test]
fn witness_writes_csv() {
    let dir = std::env::temp_dir().join(format!("twosub-witness-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("w.csv");
    let cfg = config_path();
    let out = twosub(&[
        "witness",
        cfg.to_str().unwrap(),
        "diag-1-half",
        "diag-1-third",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 5);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn selftest_passes() {
    let out = twosub(&["selftest", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = strip_timing(&out.stdout);
    assert_eq!(v["selftest"]["failed"], 0);
}
