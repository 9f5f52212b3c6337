//! End-to-end checks of the command-line surface: exit codes, marker
//! output, config-file precedence, and byte-level reproducibility.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_inertial-restart"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("inertial-restart-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn read_without_timestamp(path: &Path) -> String {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {path:?}: {e}"));
    text.lines()
        .filter(|l| !l.starts_with("# timestamp_unix"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn theory_prints_quoted_tau3() {
    let out = run(&["theory", "--alpha", "3", "--beta", "0", "--lambda", "0", "--L", "1", "--mu", "0.1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1.095445115010"), "tau3 missing from:\n{text}");
    assert!(text.contains("tau1"));
    assert!(text.contains(inertial_restart::theory::TheoryReport::CSV_HEADER));
}

#[test]
fn theory_large_lambda_prints_marker_and_exits_nonzero() {
    let out = run(&["theory", "--alpha", "3", "--lambda", "0.9", "--L", "1", "--mu", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("no-bound-available"), "marker missing:\n{text}");
    assert!(text.contains("tau3")); // tau3 itself is still reported
}

#[test]
fn missing_required_flag_is_usage_error() {
    let out = run(&["theory", "--alpha", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_config_key_rejected() {
    let dir = tmp_dir("cfg");
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "alpha = 3\nbogus_key = 1\nL = 1\n").unwrap();
    let out = run(&["theory", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus_key"));
}

#[test]
fn flags_override_config_file() {
    let dir = tmp_dir("prec");
    let cfg = dir.join("run.cfg");
    // file says lambda = 0.9 (out of range for bounds); flag pulls it back
    std::fs::write(&cfg, "alpha = 3\nL = 1\nmu = 0.1\nlambda = 0.9\n").unwrap();
    let out = run(&["theory", "--config", cfg.to_str().unwrap(), "--lambda", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("lambda       0"));
}

#[test]
fn symbolic_lambda_list_resolves_against_alpha() {
    let dir = tmp_dir("sym");
    let out = bin()
        .args([
            "discrete", "--problem", "illposed", "--N", "200", "--lambdas", "1/4a,1/2a",
            "--out-dir", dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    // 1/(4*3) and 1/(2*3)
    assert!(dir.join("illposed_discrete_extended-speed_lam0p083333.csv").exists());
    assert!(dir.join("illposed_discrete_extended-speed_lam0p166667.csv").exists());
}

#[test]
fn discrete_rerun_reproduces_csv_bytes() {
    let dir_a = tmp_dir("det-a");
    let dir_b = tmp_dir("det-b");
    for dir in [&dir_a, &dir_b] {
        let out = bin()
            .args([
                "discrete", "--problem", "illposed", "--N", "300", "--lambdas", "0,1/2a",
                "--seed", "11", "--out-dir", dir.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    for name in [
        "illposed_discrete_extended-speed_lam0p000000.csv",
        "illposed_discrete_extended-speed_lam0p166667.csv",
        "illposed_discrete_summary.csv",
        "illposed_discrete_long.csv",
    ] {
        let a = read_without_timestamp(&dir_a.join(name));
        let b = read_without_timestamp(&dir_b.join(name));
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}

#[test]
fn continuous_emits_samples_and_restart_companions() {
    let dir = tmp_dir("cont");
    let out = bin()
        .args([
            "continuous", "--problem", "illposed", "--rho", "10", "--alpha", "3", "--beta", "1",
            "--lambdas", "0", "--horizon", "10", "--out-dir", dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let samples = std::fs::read_to_string(dir.join("illposed_continuous_extended-speed_lam0p000000.csv")).unwrap();
    assert!(samples.lines().any(|l| l == "t,fval,gap,speed2,segment_index"));
    let restarts =
        std::fs::read_to_string(dir.join("illposed_continuous_extended-speed_lam0p000000_restarts.csv")).unwrap();
    assert!(restarts.lines().any(|l| l == "k,T_k,gap_at_restart"));
    assert!(restarts.lines().filter(|l| !l.starts_with('#')).count() > 2);
    // header block carries the resolved config
    assert!(samples.starts_with("# inertial-restart v"));
    assert!(samples.contains("# problem = illposed"));
    assert!(samples.contains("# seed = 7"));
}

#[test]
fn kernel_dataset_export_has_feature_columns() {
    let dir = tmp_dir("kexp");
    let data = dir.join("data.csv");
    let out = bin()
        .args([
            "kernel", "--task", "logistic", "--n", "64", "--d", "4", "--m", "8",
            "--N", "60", "--ref-budget", "300", "--lambdas", "1/2a",
            "--export-data", data.to_str().unwrap(),
            "--out-dir", dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&data).unwrap();
    assert!(text.starts_with("f0,f1,f2,f3,label"));
    assert_eq!(text.lines().count(), 65);
}
