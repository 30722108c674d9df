//! End-to-end checks of the `qdt` binary and the library run entry point:
//! subcommand dispatch, seed precedence, config rejection, and byte-level
//! determinism of every emitted file.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

use qdt::{run, Experiment, RunConfig};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qdt_cli_{name}_{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn qdt(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qdt"));
    cmd.args(args);
    cmd
}

#[test]
fn run_writes_csv_and_sidecar_deterministically() {
    let dir = scratch("run_stp");
    let mut config = RunConfig::default();
    config.experiment = Experiment::Stp;
    config.q_steps = 50;
    config.out = dir.to_str().unwrap().to_string();

    let line1 = run(&config).unwrap();
    let csv1 = fs::read(dir.join("stp.csv")).unwrap();
    let sidecar1 = fs::read_to_string(dir.join("stp_config.json")).unwrap();
    let line2 = run(&config).unwrap();
    let csv2 = fs::read(dir.join("stp.csv")).unwrap();
    let sidecar2 = fs::read_to_string(dir.join("stp_config.json")).unwrap();

    assert_eq!(line1, line2);
    assert_eq!(csv1, csv2, "rerun must reproduce stp.csv byte for byte");
    assert_eq!(sidecar1, sidecar2);
    assert!(csv1.starts_with(b"q,p_unknown,violation\n"));
    assert_eq!(csv1.iter().filter(|&&b| b == b'\n').count(), 52);

    // The sidecar holds the fully resolved config.
    let back: RunConfig = serde_json::from_str(&sidecar1).unwrap();
    assert_eq!(back, config);
}

#[test]
fn binary_runs_every_subcommand() {
    let cases: &[(&str, &[&str], &str)] = &[
        ("stp", &["--q-steps", "20"], "stp.csv"),
        ("roc", &[], "roc.csv"),
        (
            "threshold",
            &["--prior-points", "5", "--tau-points", "30"],
            "threshold.csv",
        ),
        (
            "persuade",
            &["--budget", "5", "--n-mc", "20"],
            "persuade.json",
        ),
        ("simulate", &["--n-trials", "500"], "mc.csv"),
    ];
    for (name, extra, artifact) in cases {
        let dir = scratch(&format!("sub_{name}"));
        let out = dir.to_str().unwrap();
        let output = qdt(&[name, "--out", out])
            .args(*extra)
            .output()
            .expect("binary should spawn");
        assert!(
            output.status.success(),
            "{name} failed: {}",
            String::from_utf8_lossy(&output.stderr)
        );
        let stdout = String::from_utf8(output.stdout).unwrap();
        assert!(stdout.starts_with(name), "summary line: {stdout}");
        assert!(stdout.contains("seed=7"), "default seed in: {stdout}");
        assert!(
            dir.join(artifact).exists(),
            "{name} should write {artifact}"
        );
        assert!(dir.join(format!("{name}_config.json")).exists());
    }
}

#[test]
fn binary_seed_precedence() {
    let dir = scratch("seed");
    let out = dir.to_str().unwrap();

    let env_only = qdt(&["roc", "--out", out])
        .env("QDT_SEED", "123")
        .output()
        .unwrap();
    assert!(String::from_utf8(env_only.stdout)
        .unwrap()
        .contains("seed=123"));

    let flag_beats_env = qdt(&["roc", "--out", out, "--seed", "5"])
        .env("QDT_SEED", "123")
        .output()
        .unwrap();
    assert!(String::from_utf8(flag_beats_env.stdout)
        .unwrap()
        .contains("seed=5"));

    let with_seed = dir.join("with_seed.json");
    fs::write(&with_seed, r#"{"seed": 42}"#).unwrap();
    let file_beats_env = qdt(&["roc", "--out", out, "--config", with_seed.to_str().unwrap()])
        .env("QDT_SEED", "123")
        .output()
        .unwrap();
    assert!(String::from_utf8(file_beats_env.stdout)
        .unwrap()
        .contains("seed=42"));

    let without_seed = dir.join("without_seed.json");
    fs::write(&without_seed, r#"{"k": 4}"#).unwrap();
    let env_beats_default = qdt(&[
        "roc",
        "--out",
        out,
        "--config",
        without_seed.to_str().unwrap(),
    ])
    .env("QDT_SEED", "123")
    .output()
    .unwrap();
    assert!(String::from_utf8(env_beats_default.stdout)
        .unwrap()
        .contains("seed=123"));

    let bad_env = qdt(&["roc", "--out", out])
        .env("QDT_SEED", "not-a-number")
        .output()
        .unwrap();
    assert!(!bad_env.status.success());
    assert!(String::from_utf8_lossy(&bad_env.stderr).contains("QDT_SEED"));
}

#[test]
fn binary_rejects_invalid_configs() {
    let dir = scratch("reject");
    let out = dir.to_str().unwrap();

    let unknown = dir.join("unknown.json");
    fs::write(&unknown, r#"{"mystery_knob": 3}"#).unwrap();
    let output = qdt(&["stp", "--out", out, "--config", unknown.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("mystery_knob"));

    let zero_k = dir.join("zero_k.json");
    fs::write(&zero_k, r#"{"k": 0}"#).unwrap();
    let output = qdt(&["stp", "--out", out, "--config", zero_k.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains('k'));

    // Flag overrides are validated the same way as file fields.
    let output = qdt(&["stp", "--out", out, "--epsilon", "0"])
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("epsilon"));
}

#[test]
fn simulate_summary_reports_empirical_detection_rate() {
    let dir = scratch("sim_line");
    let output = qdt(&[
        "simulate",
        "--out",
        dir.to_str().unwrap(),
        "--n-trials",
        "1000",
    ])
    .output()
    .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("p_detect="), "summary line: {stdout}");
    assert!(stdout.contains("p_false="), "summary line: {stdout}");

    // The printed rate matches the empirical column written to mc.csv.
    let csv = fs::read_to_string(dir.join("mc.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert!(stdout.contains(&format!("p_detect={}", row[6])));
}

#[test]
fn binary_reruns_are_byte_identical() {
    let dir = scratch("rerun");
    let out = dir.to_str().unwrap();
    let args = [
        "threshold",
        "--out",
        out,
        "--prior-points",
        "7",
        "--tau-points",
        "40",
    ];

    let first = qdt(&args).output().unwrap();
    assert!(first.status.success());
    let csv1 = fs::read(dir.join("threshold.csv")).unwrap();
    let sidecar1 = fs::read(dir.join("threshold_config.json")).unwrap();

    let second = qdt(&args).output().unwrap();
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(csv1, fs::read(dir.join("threshold.csv")).unwrap());
    assert_eq!(
        sidecar1,
        fs::read(dir.join("threshold_config.json")).unwrap()
    );
}
