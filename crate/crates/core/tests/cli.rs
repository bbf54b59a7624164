use std::path::Path;
use std::process::Command;

use cryocam::cli::{run_command, OUT_DIR_ENV};

fn run(out: &Path, args: &[&str]) -> i32 {
    let mut argv = vec!["cryocam", "--out-dir", out.to_str().unwrap()];
    argv.extend_from_slice(args);
    run_command(argv)
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn manifest(out: &Path) -> serde_json::Value {
    serde_json::from_str(&read(&out.join("manifest.json"))).unwrap()
}

#[test]
fn exact_search_truth_table_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("one_bit.txt");
    std::fs::write(&input, "# data\n0\n1\n---\n0\n1\nd\n").unwrap();
    let code = run(dir.path(), &["tcam", "search", "--mode", "exact", "--input", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    let csv = read(&dir.path().join("tcam_search.csv"));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("key,row,v_ml_mV,n_match,power_nW,energy_aJ"));
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 6);
    for r in &rows {
        let v: f64 = r[2].parse().unwrap();
        let key = r[0].as_str();
        let data = if r[1] == "0" { "0" } else { "1" };
        let mismatch = key != "d" && key != data;
        assert_eq!(v == 0.0, mismatch, "{r:?}");
    }
    let m = manifest(dir.path());
    assert_eq!(m["command"], "tcam search");
    assert_eq!(m["outputs"][0], "tcam_search.csv");
}

#[test]
fn hd_search_reports_match_counts() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("hd.txt");
    std::fs::write(&input, "1010\n---\n1010\n1011\n0101\n").unwrap();
    assert_eq!(run(dir.path(), &["tcam", "search", "--mode", "hd", "--input", input.to_str().unwrap()]), 0);
    let csv = read(&dir.path().join("tcam_search.csv"));
    let n: Vec<usize> = csv.lines().skip(1).map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert_eq!(n, [4, 3, 0]);
    // don't-care keys are meaningless in HD mode
    std::fs::write(&input, "1010\n---\n10d0\n").unwrap();
    assert_eq!(run(dir.path(), &["tcam", "search", "--mode", "hd", "--input", input.to_str().unwrap()]), 2);
}

#[test]
fn hdc_sweep_headline_energy() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["hdc", "sweep", "--d", "10000", "--match", "0.5"]), 0);
    let csv = read(&dir.path().join("hdc_sweep.csv"));
    assert!(csv.starts_with("d_bits,block_size,energy_J_fesquid,energy_J_sram_ref,accuracy\n"));
    for line in csv.lines().skip(1) {
        let e: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!(((e - 89.4e-15) / 89.4e-15).abs() < 0.03, "{line}");
    }
    assert!(csv.contains("10000,10,") && csv.contains(",1.29e-12,"));
}

#[test]
fn same_seed_gives_identical_outputs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [a.path(), b.path()] {
        assert_eq!(run(d, &["--seed", "11", "hdc", "train", "--dim", "512", "--texts-per-class", "4", "--text-len", "400"]), 0);
        let model = d.join("model.json");
        assert_eq!(run(d, &["hdc", "infer", "--model", model.to_str().unwrap(), "--texts-per-class", "4", "--text-len", "400"]), 0);
    }
    for f in ["model.json", "hdc_infer.csv"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let m = manifest(a.path());
    assert_eq!(m["summary"]["accuracy"], 1.0);
    // the held-out corpus follows the model's seed, recorded in the manifest
    assert_eq!(m["seed"], 2024);
}

#[test]
fn corpus_directory_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    for (label, texts) in [
        ("en", ["the cat sat on the mat and the dog sat on the log", "then the cat ran to the hat"]),
        ("xx", ["zq zq qz xq zx qqz zzq xzq qzx xqz", "qzx zqx xzz qzq xqx zxq"]),
    ] {
        std::fs::create_dir_all(corpus.join(label)).unwrap();
        for (k, t) in texts.iter().enumerate() {
            std::fs::write(corpus.join(label).join(format!("{k}.txt")), t).unwrap();
        }
    }
    let c = corpus.to_str().unwrap();
    assert_eq!(run(dir.path(), &["hdc", "train", "--corpus", c, "--dim", "2048"]), 0);
    let model = dir.path().join("model.json");
    assert_eq!(
        run(dir.path(), &["hdc", "infer", "--model", model.to_str().unwrap(), "--corpus", c, "--engine", "exact"]),
        0
    );
    assert_eq!(manifest(dir.path())["summary"]["accuracy"], 1.0);
}

#[test]
fn calibrate_reports_targets() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["tcam", "calibrate"]), 0);
    let c: serde_json::Value = serde_json::from_str(&read(&dir.path().join("calibration.json"))).unwrap();
    let b = c["measured_binary_avg_aJ"].as_f64().unwrap();
    let t = c["measured_ternary_avg_aJ"].as_f64().unwrap();
    assert!((b - 1.36).abs() < 1e-9 && (t - 26.5).abs() < 1e-9);
    assert_eq!(run(dir.path(), &["tcam", "calibrate", "--binary-aj", "10", "--ternary-aj", "5"]), 3);
}

#[test]
fn device_and_fe_outputs() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["device", "iv", "--state", "pr-", "--model", "behavioral", "--points", "11"]), 0);
    let csv = read(&dir.path().join("device_iv.csv"));
    assert!(csv.starts_with("i_bias_A,v_avg_V,state_label,model\n"));
    assert_eq!(csv.lines().count(), 12);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",PR-,behavioral")));

    assert_eq!(run(dir.path(), &["fe", "sweep", "--points-per-quarter", "10", "--cycles", "2"]), 0);
    let csv = read(&dir.path().join("fe_sweep.csv"));
    assert!(csv.starts_with("v_V,p_C_m2,branch\n"));
    assert_eq!(csv.lines().count(), 1 + 81);
}

#[test]
fn exit_codes_by_category() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["nonsense"]), 2);
    assert_eq!(run(dir.path(), &["hdc", "sweep", "--bogus-flag"]), 2);
    assert_eq!(run(dir.path(), &["hdc", "sweep", "--blocks", "300"]), 2);

    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[bias]\ni_rwl_hd_uA = 3.0\nv_write_V = 3.0\n").unwrap();
    assert_eq!(run(dir.path(), &["--config", cfg.to_str().unwrap(), "hdc", "sweep"]), 3);
    std::fs::write(&cfg, "[bias]\nunknown_key = 1\n").unwrap();
    assert_eq!(run(dir.path(), &["--config", cfg.to_str().unwrap(), "hdc", "sweep"]), 3);
    assert_eq!(run(dir.path(), &["--config", "/nonexistent/cfg.toml", "hdc", "sweep"]), 1);
}

#[test]
fn config_defaults_echoed_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[run]\nseed = 5\n[hdc]\nblock_size = 50\n").unwrap();
    assert_eq!(run(dir.path(), &["--config", cfg.to_str().unwrap(), "--seed", "9", "hdc", "sweep"]), 0);
    let m = manifest(dir.path());
    assert_eq!(m["seed"], 9);
    let echoed = m["config_toml"].as_str().unwrap();
    assert!(echoed.contains("block_size = 50"));
    assert!(echoed.contains("i_rwl_hd_uA = 5.0"));
    assert!(echoed.contains("v_write_V = 2.0"));
}

#[test]
fn binary_honours_output_dir_env_and_reports_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_cryocam");
    let out = Command::new(bin)
        .args(["hdc", "sweep", "--d", "1000"])
        .env(OUT_DIR_ENV, dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("hdc_sweep.csv").exists());
    assert!(dir.path().join("manifest.json").exists());

    let out = Command::new(bin)
        .args(["tcam", "search", "--input", "/nonexistent"])
        .env(OUT_DIR_ENV, dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    let json_line = stderr.lines().last().unwrap();
    let v: serde_json::Value = serde_json::from_str(json_line).unwrap();
    assert_eq!(v["error"]["category"], "io");
}
