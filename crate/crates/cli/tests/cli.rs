//! End-to-end checks of the command surface: exit codes, JSON verdicts, file
//! outputs, and byte-stable rendering.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn dff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dff"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_function(dir: &Path, name: &str, json: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path
}

fn identity_json() -> String {
    dff_core::pwl::to_json(&dff_core::compendium::identity())
}

fn bj(c: (i64, i64)) -> String {
    dff_core::pwl::to_json(
        &dff_core::compendium::phi_bj_1(&dff_core::rational::rat(c.0, c.1)).unwrap(),
    )
}

#[test]
fn maximality_exit_codes_and_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let id = write_function(dir.path(), "id.json", &identity_json());
    let out = dff(&["maximality", id.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("\"is_maximal\":true"));

    // A valid but dominated function: 0 on [0,1), 1 at 1.
    let step = r#"{"format":"dff-pwl-v1","breakpoints":[{"x":"0","limit_left":null,"value":"0","limit_right":"0"},{"x":"1","limit_left":"0","value":"1","limit_right":null}]}"#;
    let step = write_function(dir.path(), "step.json", step);
    let out = dff(&["maximality", step.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("\"is_maximal\":false"));
    assert!(stdout.contains("symmetry"));
}

#[test]
fn malformed_rational_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = identity_json().replace("\"1\"", "\"1/0\"");
    let path = write_function(dir.path(), "bad.json", &bad);
    for cmd in ["maximality", "extremality"] {
        let out = dff(&[cmd, path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(3), "{cmd}");
    }
}

#[test]
fn extremality_reports_witness_for_bj_three_halves() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_function(dir.path(), "bj32.json", &bj((3, 2)));
    let out = dff(&["extremality", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "not_extreme");
    assert_eq!(v["cover"]["uncovered"][0][0], "1/3");
    assert_eq!(v["cover"]["uncovered"][0][1], "2/3");
    assert!(v["witness"]["epsilon"].is_string());
    assert_eq!(v["witness"]["phi_tilde"]["format"], "dff-pwl-v1");
}

#[test]
fn search_writes_report_and_functions() {
    let dir = tempfile::tempdir().unwrap();
    let out = dff(&[
        "search",
        "--q",
        "5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("\"format\":\"dff-search-v1\""));
    assert!(stdout.contains("\"q\":5"));
    assert!(stdout.contains("\"dim\":2"));
    assert!(stdout.contains("\"vertices\":3"));
    assert!(stdout.contains("\"extreme\":2"));
    assert!(stdout.contains("\"inconclusive\":0"));
    let report = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    assert_eq!(report, stdout.trim_end());

    let mut files: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with("q5_"))
        .collect();
    files.sort();
    assert_eq!(files.len(), 2);
    // Round trip: loading and re-serializing is byte-identical.
    for name in &files {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        let f = dff_core::pwl::from_json(&text).unwrap();
        assert_eq!(dff_core::pwl::to_json(&f), text);
    }
}

#[test]
fn search_q2_produces_the_identity() {
    let dir = tempfile::tempdir().unwrap();
    let out = dff(&["search", "--q", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("\"vertices\":1"));
    assert!(stdout.contains("\"extreme\":1"));
    let text = std::fs::read_to_string(dir.path().join("q2_v0.json")).unwrap();
    assert_eq!(text, identity_json());
    let out = dff(&["search", "--q", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn convert_pipeline_and_rejections() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("conv.json");
    let out = dff(&[
        "convert", "--family", "sawtooth", "--b", "7/2", "--lambda", "1/2",
        "--restrict", "--out", out_file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["maximal"], true);
    assert_eq!(summary["extremality"], "extreme");
    let f = dff_core::pwl::from_json(&std::fs::read_to_string(&out_file).unwrap()).unwrap();
    assert_eq!(f.distinct_slope_count(), 2);

    // lambda above 1/max_slope is rejected.
    let out = dff(&[
        "convert", "--family", "sawtooth", "--b", "7/2", "--lambda", "1",
    ]);
    assert_eq!(out.status.code(), Some(3));

    // Below the extremality threshold the verdict is reported instead.
    let out = dff(&[
        "convert", "--family", "sawtooth", "--b", "3/2", "--lambda", "1/2",
        "--restrict", "--out", out_file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["maximal"], true);
    assert_eq!(summary["extremality"], "not_extreme");
}

#[test]
fn cut_and_bound_commands() {
    let dir = tempfile::tempdir().unwrap();
    let gdff = dir.path().join("psi.json");
    let out = dff(&[
        "convert", "--family", "sawtooth", "--b", "7/2", "--lambda", "1/2",
        "--out", gdff.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = dff(&[
        "cut", gdff.to_str().unwrap(), "--row", "1/7,3/7,1", "--rhs", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["coefficients"][0], "0");
    assert_eq!(v["coefficients"][1], "1/3");
    assert_eq!(v["coefficients"][2], "1");
    assert_eq!(v["rhs"], "1");

    let bj32 = write_function(dir.path(), "bj32.json", &bj((3, 2)));
    let out = dff(&["bound", bj32.to_str().unwrap(), "--a", "2/3", "--b", "9/10"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["bound"], "60/47"); // 420/329 in lowest terms
}

#[test]
fn compendium_commands() {
    let out = dff(&["compendium", "list"]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("identity"));
    assert!(stdout.contains("phi_bj_1"));

    let out = dff(&["compendium", "get", "phi_bj_1", "--param", "C=5/2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim_end(), bj((5, 2)));

    let out = dff(&["compendium", "get", "nope"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn plot_matches_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    for (json, golden) in [
        (identity_json(), "identity.svg"),
        (bj((5, 2)), "phi_bj_5_2.svg"),
    ] {
        let input = write_function(dir.path(), "f.json", &json);
        let out_path = dir.path().join("plot.svg");
        let out = dff(&[
            "plot",
            input.to_str().unwrap(),
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let produced = std::fs::read(&out_path).unwrap();
        let expected =
            std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(golden))
                .unwrap();
        assert_eq!(produced, expected, "{golden} drifted");
    }
}
