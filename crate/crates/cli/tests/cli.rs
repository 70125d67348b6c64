use std::process::{Command, Output};

fn flatdisk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatdisk")).args(args).output().expect("spawn flatdisk")
}

#[test]
fn oracle_passes_with_exit_zero() {
    let out = flatdisk(&["verify", "oracle", "--q", "3", "--d", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS"));
}

#[test]
fn exit_codes() {
    assert_eq!(flatdisk(&["verify", "oracle", "--q", "6"]).status.code(), Some(2));
    assert_eq!(flatdisk(&["verify", "frobnicate"]).status.code(), Some(2));
    assert_eq!(flatdisk(&["kakeya", "--q", "3", "--p", "1/2"]).status.code(), Some(2));
    // (2, 3) at n = 4 violates the necessary conditions: a failed check, not a usage error.
    assert_eq!(flatdisk(&["exponents", "check", "--n", "4", "--p", "2", "--r", "3"]).status.code(), Some(1));
}

#[test]
fn explicit_modulus_matches_default_field() {
    let a = flatdisk(&["verify", "oracle", "--q", "9", "--d", "2"]);
    let b = flatdisk(&["verify", "oracle", "--char", "3", "--ell", "2", "--modulus", "1,0,1", "--d", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let bad = flatdisk(&["verify", "oracle", "--char", "3", "--ell", "2", "--modulus", "2,0,1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for fmt in ["json", "csv"] {
        let args = ["norms", "extension", "--q", "3", "--d", "2", "--r", "4", "--restarts", "3", "--iters", "50", "--format", fmt];
        let a = flatdisk(&args);
        let b = flatdisk(&args);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "format {fmt}");
    }
}

#[test]
fn out_file_receives_report_and_stdout_the_summary() {
    let dir = std::env::temp_dir().join(format!("flatdisk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ledger.csv");
    let out = flatdisk(&["exponents", "derive", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("id,variety,"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("exponents derive: PASS"));
    std::fs::remove_dir_all(&dir).unwrap();
}
