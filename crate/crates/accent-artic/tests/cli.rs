//! End-to-end tests of the `accent-artic` binary: subcommands, exit codes,
//! and input validation.

mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_accent-artic"))
}

fn config_path(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("config.toml");
    fs::write(
        &path,
        "[analysis]\nvowels = [\"a\", \"e\", \"i\", \"o\", \"u\"]\n",
    )
    .unwrap();
    path
}

fn assert_code(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn run_writes_all_report_tables() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = common::generate_corpus_sized(dir.path(), 9, 4, 2);
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["run", manifest.to_str().unwrap()])
        .args(["--config", config_path(dir.path()).to_str().unwrap()])
        .args(["--out", out_dir.to_str().unwrap()])
        .args(["--seed", "123"])
        .output()
        .unwrap();
    assert_code(&out, 0);
    for name in [
        "accent_scores.csv",
        "per_utterance_distances.csv",
        "regression_cells.csv",
        "scatter_points.csv",
        "summary_table.csv",
        "gesture_fits.csv",
        "training.csv",
        "provenance.csv",
        "run_config.toml",
    ] {
        assert!(out_dir.join(name).exists(), "missing {name}");
    }
    let echoed = fs::read_to_string(out_dir.join("run_config.toml")).unwrap();
    assert!(echoed.starts_with("seed = 123"));
    let scores = fs::read_to_string(out_dir.join("accent_scores.csv")).unwrap();
    assert_eq!(scores.lines().count(), 5); // header + 4 speakers
}

#[test]
fn subcommands_produce_their_tables() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = common::generate_corpus_sized(dir.path(), 9, 4, 2);
    let cfg = config_path(dir.path());
    for (cmd, expect) in [
        ("train-weights", "weights_us.csv"),
        ("score", "accent_scores.csv"),
        ("fit", "gesture_fits.csv"),
        ("regress", "regression_cells.csv"),
        ("report", "summary_table.csv"),
    ] {
        let out_dir = dir.path().join(format!("out_{cmd}"));
        let out = bin()
            .args([cmd, manifest.to_str().unwrap()])
            .args(["--config", cfg.to_str().unwrap()])
            .args(["--out", out_dir.to_str().unwrap()])
            .output()
            .unwrap();
        assert_code(&out, 0);
        assert!(out_dir.join(expect).exists(), "{cmd}: missing {expect}");
    }

    let out_dir = dir.path().join("out_reparam");
    let out = bin()
        .args(["reparam", manifest.to_str().unwrap()])
        .args(["--config", cfg.to_str().unwrap()])
        .args(["--out", out_dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert_code(&out, 0);
    let track = fs::read_to_string(out_dir.join("reparam/spk00_u00.csv")).unwrap();
    assert!(track.starts_with("t,LA,LP,JAW,TTA,TTR,TBA,TBR,TDA,TDR"));
}

#[test]
fn measure_and_stat_flags_restrict_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = common::generate_corpus_sized(dir.path(), 9, 4, 2);
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["report", manifest.to_str().unwrap()])
        .args(["--config", config_path(dir.path()).to_str().unwrap()])
        .args(["--out", out_dir.to_str().unwrap()])
        .args(["--measure", "us", "--stat", "mean"])
        .output()
        .unwrap();
    assert_code(&out, 0);
    let cells = fs::read_to_string(out_dir.join("regression_cells.csv")).unwrap();
    for line in cells.lines().skip(1) {
        let fields: Vec<_> = line.split(',').collect();
        assert_eq!(fields[2], "mean");
        assert_eq!(fields[3], "us");
    }
    // 5 vowels x 9 features x 1 stat x 1 measure
    assert_eq!(cells.lines().count(), 1 + 45);
}

#[test]
fn missing_manifest_is_an_input_error() {
    let out = bin().args(["run", "/nonexistent/manifest.toml"]).output().unwrap();
    assert_code(&out, 1);
}

#[test]
fn malformed_ema_row_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = common::generate_corpus_sized(dir.path(), 9, 4, 2);
    // truncate one EMA row to 11 columns
    let ema = dir.path().join("ema/spk01_u00.csv");
    let text = fs::read_to_string(&ema).unwrap();
    let mangled: Vec<String> = text
        .lines()
        .enumerate()
        .map(|(i, l)| {
            if i == 3 {
                l.rsplitn(3, ',').nth(2).unwrap().to_string()
            } else {
                l.to_string()
            }
        })
        .collect();
    fs::write(&ema, mangled.join("\n")).unwrap();
    let out = bin()
        .args(["score", manifest.to_str().unwrap()])
        .args(["--config", config_path(dir.path()).to_str().unwrap()])
        .output()
        .unwrap();
    assert_code(&out, 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("spk01_u00"), "stderr: {stderr}");
}

#[test]
fn duplicate_utterance_id_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = common::generate_corpus_sized(dir.path(), 9, 4, 2);
    let text = fs::read_to_string(&manifest).unwrap();
    let dup = text.replace("id = \"spk00_u01\"", "id = \"spk00_u00\"");
    assert_ne!(text, dup);
    fs::write(&manifest, dup).unwrap();
    let out = bin().args(["score", manifest.to_str().unwrap()]).output().unwrap();
    assert_code(&out, 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate utterance id"));
}

#[test]
fn invalid_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = common::generate_corpus_sized(dir.path(), 9, 4, 2);
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[train]\nmax_iters = 0\n").unwrap();
    let out = bin()
        .args(["run", manifest.to_str().unwrap()])
        .args(["--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_code(&out, 3);
}

#[test]
fn degenerate_tongue_data_is_a_numeric_error() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = common::generate_corpus_sized(dir.path(), 9, 4, 2);
    // constant tongue coordinates make the per-speaker PCA rank deficient
    for u in 0..2 {
        let path = dir.path().join(format!("ema/spk00_u0{u}.csv"));
        let mut s = String::from("t,ULx,ULy,LLx,LLy,LIx,LIy,TTx,TTy,TBx,TBy,TDx,TDy\n");
        for i in 0..50 {
            s += &format!(
                "{:.4},0.1,0.2,0.3,0.4,0.5,0.6,1.0,1.0,1.0,1.0,1.0,1.0\n",
                i as f64 / 50.0
            );
        }
        fs::write(path, s).unwrap();
    }
    let out = bin()
        .args(["reparam", manifest.to_str().unwrap()])
        .args(["--config", config_path(dir.path()).to_str().unwrap()])
        .args(["--out", dir.path().join("out").to_str().unwrap()])
        .output()
        .unwrap();
    assert_code(&out, 2);
}

#[test]
fn too_few_speakers_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = common::generate_corpus_sized(dir.path(), 9, 2, 2);
    let out = bin()
        .args(["run", manifest.to_str().unwrap()])
        .args(["--config", config_path(dir.path()).to_str().unwrap()])
        .args(["--out", dir.path().join("out").to_str().unwrap()])
        .output()
        .unwrap();
    assert_code(&out, 1);
}
