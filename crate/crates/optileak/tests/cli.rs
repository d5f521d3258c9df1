//! Smoke tests for the command-line binary: wiring, exit codes, JSON output.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_optileak"))
}

#[test]
fn roundtrip_subcommand_reports_pass() {
    let out = tempfile::tempdir().unwrap();
    let output =
        bin().args(["roundtrip", "--seed", "7", "--out"]).arg(out.path()).output().unwrap();
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let json: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(json["pass"], true);
    assert_eq!(json["reconstruct"]["payload"]["content"], "00000000000000000007");
    assert!(out.path().join("captured").join("run.json").exists());
}

#[test]
fn conceal_refuses_gate_violation_with_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"object":{"kind":"qr","payload":{"mode":"numeric","content":"1"}},"polarity":"dark"}"#,
    )
    .unwrap();
    let output = bin()
        .args(["conceal", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("stealth check"), "stderr: {stderr}");
}
