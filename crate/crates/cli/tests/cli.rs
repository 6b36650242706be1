//! End-to-end checks of the `covertime` binary: exit codes, config handling,
//! and byte-level reproducibility of emitted files.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_covertime"))
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("covertime-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap()
}

#[test]
fn predict_table_stdout() {
    let out = bin()
        .args(["predict-table", "--param", "kind=\"torus-cover\"", "--param", "n=100"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("experiment,replicate,seed,params_json,value,runtime_ms"));
    assert!(text.contains("270023.45"), "value missing from: {text}");
}

#[test]
fn unknown_experiment_exits_2() {
    let out = bin().arg("no-such-experiment").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_domain_exits_2() {
    let out = bin()
        .args(["gamma-cover", "--param", "n=64", "--param", "gamma=1.5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_reruns_byte_identical() {
    let dir = tmpdir("repro");
    let config_path = dir.join("cover.json");
    std::fs::write(
        &config_path,
        r#"{"experiment":"cover-torus","params":{"n":16},"replicates":6,"master_seed":31}"#,
    )
    .unwrap();
    let out_a = dir.join("a.csv");
    let out_b = dir.join("b.csv");
    let jl_a = dir.join("a.jsonl");
    let jl_b = dir.join("b.jsonl");
    for (out, jl, workers) in [(&out_a, &jl_a, "1"), (&out_b, &jl_b, "8")] {
        let status = bin()
            .args([
                "cover-torus",
                "--config",
                config_path.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
                "--jsonl",
                jl.to_str().unwrap(),
                "--workers",
                workers,
            ])
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(read(&out_a), read(&out_b), "1 vs 8 workers must be byte-identical");
    assert_eq!(read(&jl_a), read(&jl_b));
    // and a literal rerun reproduces the bytes too
    let status = bin()
        .args([
            "cover-torus",
            "--config",
            config_path.to_str().unwrap(),
            "--out",
            out_b.to_str().unwrap(),
            "--workers",
            "3",
        ])
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(read(&out_a), read(&out_b));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn config_experiment_mismatch_exits_2() {
    let dir = tmpdir("mismatch");
    let config_path = dir.join("cover.json");
    std::fs::write(
        &config_path,
        r#"{"experiment":"cover-torus","params":{"n":8},"replicates":1,"master_seed":0}"#,
    )
    .unwrap();
    let out = bin()
        .args(["bm-cover", "--config", config_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn check_pass_and_fail_exit_codes() {
    let dir = tmpdir("check");
    let out_path = dir.join("out.csv");
    // a generous band passes
    let ok = bin()
        .args([
            "cover-torus",
            "--param",
            "n=16",
            "--replicates",
            "8",
            "--seed",
            "5",
            "--out",
            out_path.to_str().unwrap(),
            "--check",
            "--band",
            "0.05,2.0",
        ])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let summary = String::from_utf8(ok.stdout).unwrap();
    assert!(summary.starts_with("experiment,statistic,value,predictor,ratio,band_low,band_high,pass"));
    assert!(summary.contains(",true"));
    assert!(out_path.with_extension("csv.summary.csv").exists() || dir.join("out.csv.summary.csv").exists());
    // an impossible band fails with exit 3
    let fail = bin()
        .args([
            "cover-torus",
            "--param",
            "n=16",
            "--replicates",
            "8",
            "--seed",
            "5",
            "--check",
            "--band",
            "0.999999,1.000001",
        ])
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(3));
    std::fs::remove_dir_all(&dir).ok();
}
