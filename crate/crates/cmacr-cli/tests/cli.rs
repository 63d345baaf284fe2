//! Functional tests of the `cmacr` binary: exit codes, artifact names and
//! CSV headers for each mode, and the configuration error paths.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmacr"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn first_line(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap().lines().next().unwrap_or_default().to_owned()
}

#[test]
fn gaussian_region_writes_six_frontier_files() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["--mode", "gaussian-region", "--grid-step", "0.25", "--out", "r"], tmp.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let dir = tmp.path().join("r");
    for strategy in ["df", "cf", "outer"] {
        for gamma in ["1", "5"] {
            let f = dir.join(format!("fig2_{strategy}_gamma{gamma}.csv"));
            assert!(f.is_file(), "missing {}", f.display());
            assert_eq!(first_line(&f), "theta,r1,r2,r3,provenance");
            // Header plus one row per sweep direction.
            assert_eq!(std::fs::read_to_string(&f).unwrap().lines().count(), 182);
        }
    }
}

#[test]
fn strategy_selection_narrows_the_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("cfg.json"),
        "{\"mode\":\"gaussian-region\",\"strategies\":[\"cf\"],\"gamma_sq\":2.5,\"grid_step\":0.25,\"out\":\"r\"}",
    )
    .unwrap();
    let out = run(&["--config", "cfg.json"], tmp.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let files: Vec<String> = std::fs::read_dir(tmp.path().join("r"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert_eq!(files, vec!["fig2_cf_gamma2.5.csv"]);
}

#[test]
fn gaussian_sweep_writes_wide_csv() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("cfg.json"),
        "{\"mode\":\"gaussian-sweep\",\"p_db_list\":[0,10],\"grid_step\":0.2,\"out\":\"s\"}",
    )
    .unwrap();
    let out = run(&["--config", "cfg.json"], tmp.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let f = tmp.path().join("s").join("fig3_sweep.csv");
    let text = std::fs::read_to_string(&f).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p_db,df_rate,cf_rate,outer_rate"));
    assert_eq!(lines.clone().count(), 2, "one row per swept power");
    for row in lines {
        assert_eq!(row.split(',').count(), 4, "malformed row {row}");
    }
}

#[test]
fn dmc_search_names_artifact_after_region_kind() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("cfg.json"),
        "{\"mode\":\"dmc-search\",\"region_kind\":\"outer\",\"budget\":32,\"seed\":4,\"out\":\"d\"}",
    )
    .unwrap();
    let out = run(&["--config", "cfg.json"], tmp.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let f = tmp.path().join("d").join("dmc_outer_cloud.csv");
    assert_eq!(first_line(&f), "theta,r1,r2,r3,provenance");
    let text = std::fs::read_to_string(&f).unwrap();
    assert!(text.lines().count() > 1, "cloud is empty");
    assert!(text.contains(",outer#"), "provenance tags missing");
}

#[test]
fn verify_mode_writes_report_and_passes() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("cfg.json"),
        "{\"mode\":\"verify\",\"draws\":2,\"grid_step\":0.25,\"out\":\"v\"}",
    )
    .unwrap();
    let out = run(&["--config", "cfg.json"], tmp.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("v").join("verify_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["passed"], serde_json::Value::Bool(true));
    assert!(report["checks"].as_array().unwrap().len() >= 10);
}

#[test]
fn injected_fault_fails_verification_with_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("cfg.json"),
        "{\"mode\":\"verify\",\"draws\":2,\"grid_step\":0.25,\"fault\":\"inflate-df-sum-rate\",\"out\":\"v\"}",
    )
    .unwrap();
    let out = run(&["--config", "cfg.json"], tmp.path());
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("v").join("verify_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["passed"], serde_json::Value::Bool(false));
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == serde_json::Value::Bool(false))
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, vec!["gaussian-df-within-outer-per-split"]);
}

#[test]
fn config_errors_exit_with_code_two() {
    let tmp = tempfile::tempdir().unwrap();

    // Unknown configuration field.
    std::fs::write(tmp.path().join("bad_field.json"), "{\"mode\":\"verify\",\"dras\":2}").unwrap();
    let out = run(&["--config", "bad_field.json"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("dras"), "error should name the bad field: {}", stderr(&out));

    // Grid step outside (0, 0.5].
    let out = run(&["--mode", "gaussian-region", "--grid-step", "0.9"], tmp.path());
    assert_eq!(out.status.code(), Some(2));

    // Output directory blocked by an existing file.
    std::fs::write(tmp.path().join("blocker"), "x").unwrap();
    let out = run(&["--mode", "gaussian-sweep", "--out", "blocker"], tmp.path());
    assert_eq!(out.status.code(), Some(2));

    // Unknown strategy name.
    std::fs::write(
        tmp.path().join("bad_strategy.json"),
        "{\"mode\":\"gaussian-region\",\"strategies\":[\"qf\"]}",
    )
    .unwrap();
    let out = run(&["--config", "bad_strategy.json"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("qf"), "error should name the bad strategy: {}", stderr(&out));

    // Explicitly empty power sweep.
    std::fs::write(tmp.path().join("empty_sweep.json"), "{\"mode\":\"gaussian-sweep\",\"p_db_list\":[]}").unwrap();
    let out = run(&["--config", "empty_sweep.json"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("sweep"), "{}", stderr(&out));
}

#[test]
fn custom_dmc_channel_accepted_from_config() {
    let tmp = tempfile::tempdir().unwrap();
    // A binary adder relay observation with clean direct links, supplied as
    // an explicit transition table: y1 = x1, y2 = x2, y3 = x1 XOR x2 (x3 idle).
    let mut trans = Vec::new();
    for x in 0..8u32 {
        let (x1, x2) = ((x >> 2) & 1, (x >> 1) & 1);
        for y in 0..8u32 {
            let (y1, y2, y3) = ((y >> 2) & 1, (y >> 1) & 1, y & 1);
            let p = if y1 == x1 && y2 == x2 && y3 == (x1 ^ x2) { 1.0 } else { 0.0 };
            trans.push(p);
        }
    }
    let cfg = serde_json::json!({
        "mode": "dmc-search",
        "budget": 32,
        "seed": 2,
        "out": "d",
        "channel": {"card_x": [2, 2, 2], "card_y": [2, 2, 2], "trans": trans},
    });
    std::fs::write(tmp.path().join("cfg.json"), cfg.to_string()).unwrap();
    let out = run(&["--config", "cfg.json"], tmp.path());
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(tmp.path().join("d").join("dmc_df_cloud.csv").is_file());
}
