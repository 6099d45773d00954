use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn lab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_malliavin-lab"))
        .args(args)
        .current_dir(dir)
        .env_remove("MALLIAVIN_LAB_OUT")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn reproductions_exit_zero_and_write_evidence() {
    let tmp = TempDir::new().unwrap();
    let out = lab(tmp.path(), &["reproduce-thm31"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = std::fs::read_to_string(tmp.path().join("reproduce-thm31.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("# schema=1"));
    assert_eq!(lines.next(), Some("quantity,q,epsilon,verdict,value,abs_error"));
    assert!(csv.contains("flag_ssgd_pp,,,no,,"));
    assert!(tmp.path().join("reproduce-thm31.config").exists());

    let out = lab(tmp.path(), &["reproduce-thm31", "--a", "3"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = lab(tmp.path(), &["reproduce-thm33"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = std::fs::read_to_string(tmp.path().join("reproduce-thm33.csv")).unwrap();
    assert!(csv.contains("flag_ssgd_pp,,,yes,,") && csv.contains("flag_d1p_plus,,,no,,"));
}

#[test]
fn bad_parameters_exit_64() {
    let tmp = TempDir::new().unwrap();
    let out = lab(tmp.path(), &["reproduce-thm31", "--a", "1"]);
    assert_eq!(code(&out), 64);
    assert!(stderr(&out).contains("3/2"), "{}", stderr(&out));

    let out = lab(tmp.path(), &["reproduce-thm33", "--eta", "0.1", "--mu", "0.2"]);
    assert_eq!(code(&out), 64);
    assert!(stderr(&out).contains("condition violated"), "{}", stderr(&out));

    let out = lab(tmp.path(), &["diagnose", "--functional", "nope"]);
    assert_eq!(code(&out), 64);
    assert!(stderr(&out).contains("unknown name 'nope'"));

    for args in [&["diagnose"][..], &["frobnicate"], &["reproduce-thm31", "--eps-grid", "3..1"]] {
        assert_eq!(code(&lab(tmp.path(), args)), 64, "{args:?}");
    }
    assert_eq!(code(&lab(tmp.path(), &["--help"])), 0);
    // Nothing is written for a rejected run.
    assert!(!tmp.path().join("reproduce-thm33.csv").exists());
}

#[test]
fn flags_override_config_which_overrides_defaults() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("run.config");
    std::fs::write(&cfg, "# custom run\na=1\neps-grid=2..5\n").unwrap();
    let out = lab(tmp.path(), &["reproduce-thm31", "--config", "run.config"]);
    assert_eq!(code(&out), 64, "a=1 from the file must be rejected");

    let out = lab(tmp.path(), &["reproduce-thm31", "--config", "run.config", "--a", "2.5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let written = std::fs::read_to_string(tmp.path().join("reproduce-thm31.config")).unwrap();
    assert!(written.lines().any(|l| l == "a=2.5"));
    assert!(written.lines().any(|l| l == "eps-grid=2..5"));

    // The written config reproduces the run byte for byte.
    let first = std::fs::read(tmp.path().join("reproduce-thm31.csv")).unwrap();
    std::fs::rename(tmp.path().join("reproduce-thm31.config"), tmp.path().join("again.config")).unwrap();
    let out = lab(tmp.path(), &["reproduce-thm31", "--config", "again.config"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(std::fs::read(tmp.path().join("reproduce-thm31.csv")).unwrap(), first);
}

#[test]
fn output_directory_from_environment_and_markdown() {
    let tmp = TempDir::new().unwrap();
    let target = tmp.path().join("evidence");
    let out = Command::new(env!("CARGO_BIN_EXE_malliavin-lab"))
        .args(["diagnose", "--functional", "square", "--format", "md"])
        .current_dir(tmp.path())
        .env("MALLIAVIN_LAB_OUT", &target)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let md = std::fs::read_to_string(target.join("diagnose-square.md")).unwrap();
    assert!(md.starts_with("# "));
    assert!(md.contains("| quantity | q | epsilon | verdict | value | abs_error |"));
    assert!(target.join("diagnose-square.config").exists());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    for (name, args) in [
        ("reproduce-thm33", &["reproduce-thm33"][..]),
        ("cm-check", &["cm-check", "--n-samples", "20000", "--seed", "9"][..]),
    ] {
        let mut runs = Vec::new();
        for k in 0..2 {
            let dir = format!("run{k}");
            let mut full = args.to_vec();
            full.extend(["--out", &dir]);
            let out = lab(tmp.path(), &full);
            assert_eq!(code(&out), 0, "{}", stderr(&out));
            runs.push(std::fs::read(tmp.path().join(&dir).join(format!("{name}.csv"))).unwrap());
        }
        assert_eq!(runs[0], runs[1], "{name}");
    }
}

#[test]
fn cm_check_constant_and_small_samples() {
    let tmp = TempDir::new().unwrap();
    let out = lab(tmp.path(), &["cm-check", "--poly", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = std::fs::read_to_string(tmp.path().join("cm-check.csv")).unwrap();
    assert!(csv.contains("cm_lhs,,,estimate,1e0,0e0"), "{csv}");

    let out = lab(tmp.path(), &["cm-check", "--n-samples", "10"]);
    assert!([0, 1].contains(&code(&out)), "{}", stderr(&out));
    assert_eq!(code(&lab(tmp.path(), &["cm-check", "--n-samples", "1"])), 64);
    assert_eq!(code(&lab(tmp.path(), &["cm-check", "--poly", "x3", "--dir", "const:1"])), 64);
}
