//! End-to-end tests of the `pipp` binary: argument handling, exit codes, file
//! formats and reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn pipp(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pipp"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) {
    std::fs::write(dir.join(name), contents).unwrap();
}

const STRAUSS_HARD: &str = r#"{"family":"strauss","gamma":[0.0],"radii":[0.1]}"#;

#[test]
fn approx_poisson_endpoint() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "model.json",
        r#"{"family":"strauss","gamma":[1.0],"radii":[0.1]}"#,
    );
    let out = pipp(
        &["approx", "--config", "model.json", "--beta", "100"],
        dir.path(),
    );
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["lambda_ps"], 100.0);
    assert_eq!(value["lambda_dpp"], 100.0);
}

#[test]
fn approx_hard_core_desk_values() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "model.json", STRAUSS_HARD);
    let out = pipp(
        &["approx", "--config", "model.json", "--beta", "100"],
        dir.path(),
    );
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let lambda_ps = value["lambda_ps"].as_f64().unwrap();
    let lambda_dpp = value["lambda_dpp"].as_f64().unwrap();
    assert!((lambda_ps - 34.17).abs() < 0.01, "lambda_ps = {lambda_ps}");
    assert!((lambda_dpp - 29.0).abs() < 0.1, "lambda_dpp = {lambda_dpp}");
}

#[test]
fn approx_rejects_malformed_config_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.json", "{ this is not json");
    let out = pipp(
        &["approx", "--config", "bad.json", "--beta", "100"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty(), "diagnostic expected on stderr");

    write(
        dir.path(),
        "invalid.json",
        r#"{"family":"strauss","gamma":[1.5],"radii":[0.1]}"#,
    );
    let out = pipp(
        &["approx", "--config", "invalid.json", "--beta", "100"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_default_grid_and_poisson_endpoint() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "exp.json",
        r#"{"model_template":{"family":"strauss","gamma":[0.5],"radii":[0.1]},"beta":100.0}"#,
    );
    let out = pipp(
        &["sweep", "--config", "exp.json", "--out", "table.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let table = std::fs::read_to_string(dir.path().join("table.csv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "gamma1,beta,G,kappa,lambda_ps,lambda_dpp");
    assert_eq!(lines.len(), 22, "header plus 21 grid rows");

    // gamma1 = 1 endpoint: both approximations equal beta exactly
    let last: Vec<f64> = lines[21].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(last[4], 100.0);
    assert_eq!(last[5], 100.0);

    // lambda_dpp strictly increasing down the column, and <= lambda_ps
    let mut prev = 0.0;
    for line in &lines[1..] {
        let fields: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert!(fields[5] > prev, "lambda_dpp not strictly increasing");
        assert!(fields[5] <= fields[4] && fields[4] <= 100.0);
        prev = fields[5];
    }
}

#[test]
fn sweep_diggle_gratton_grid_excludes_zero() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "exp.json",
        r#"{"model_template":{"family":"diggle_gratton","gamma":[0.5],"radii":[0.05]},"beta":200.0}"#,
    );
    let out = pipp(
        &["sweep", "--config", "exp.json", "--out", "dg.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let table = std::fs::read_to_string(dir.path().join("dg.csv")).unwrap();
    assert_eq!(table.lines().count(), 21, "header plus 20 rows");
    let first_row: Vec<&str> = table.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first_row[0].parse::<f64>().unwrap(), 0.05);
}

#[test]
fn sweep_with_mc_columns_and_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "exp.json",
        r#"{
            "model_template": {"family":"strauss","gamma":[0.5],"radii":[0.1]},
            "beta": 50.0,
            "gamma1_grid": [0.2, 0.8],
            "mc": {"n_replicates": 8, "n_steps": 2000, "seed": 5}
        }"#,
    );
    let run = |name: &str| {
        let out = pipp(
            &["sweep", "--config", "exp.json", "--out", name],
            dir.path(),
        );
        assert!(out.status.success());
        std::fs::read(dir.path().join(name)).unwrap()
    };
    let first = run("mc1.csv");
    let second = run("mc2.csv");
    assert_eq!(first, second, "same config and seed must be byte-identical");

    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with(
        "gamma1,beta,G,kappa,lambda_ps,lambda_dpp,mc_mean,mc_se,mc_q1,mc_median,mc_q3\n"
    ));
    assert_eq!(text.lines().count(), 3);

    // --no-mc drops the MC columns
    let out = pipp(
        &[
            "sweep",
            "--config",
            "exp.json",
            "--out",
            "plain.csv",
            "--no-mc",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let plain = std::fs::read_to_string(dir.path().join("plain.csv")).unwrap();
    assert!(plain.starts_with("gamma1,beta,G,kappa,lambda_ps,lambda_dpp\n"));

    // a different seed changes the MC columns
    let out = pipp(
        &[
            "sweep",
            "--config",
            "exp.json",
            "--out",
            "seeded.csv",
            "--seed",
            "99",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let seeded = std::fs::read(dir.path().join("seeded.csv")).unwrap();
    assert_ne!(seeded, second);
}

#[test]
fn sweep_rejects_bad_grid() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "exp.json",
        r#"{"model_template":{"family":"strauss","gamma":[0.5],"radii":[0.1]},"beta":100.0,"gamma1_grid":[0.5,0.2]}"#,
    );
    let out = pipp(
        &["sweep", "--config", "exp.json", "--out", "x.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn figure_renders_curves_and_boxplots() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "exp.json",
        r#"{
            "model_template": {"family":"strauss","gamma":[0.5],"radii":[0.1]},
            "beta": 50.0,
            "gamma1_grid": [0.2, 0.5, 0.8],
            "mc": {"n_replicates": 4, "n_steps": 1000}
        }"#,
    );
    assert!(pipp(
        &["sweep", "--config", "exp.json", "--out", "mc.csv"],
        dir.path()
    )
    .status
    .success());
    assert!(pipp(
        &[
            "sweep",
            "--config",
            "exp.json",
            "--out",
            "plain.csv",
            "--no-mc"
        ],
        dir.path()
    )
    .status
    .success());

    // single panel without MC: two curves, no boxplot glyphs
    let out = pipp(&["figure", "plain.csv", "--out", "plain.svg"], dir.path());
    assert!(out.status.success());
    let svg = std::fs::read_to_string(dir.path().join("plain.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("stroke-dasharray"), "dashed PS curve expected");
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert!(!svg.contains("stroke=\"gray\""), "no MC glyphs expected");

    // with MC: boxplot glyphs appear (4 gray lines per grid value)
    let out = pipp(&["figure", "mc.csv", "--out", "mc.svg"], dir.path());
    assert!(out.status.success());
    let svg = std::fs::read_to_string(dir.path().join("mc.svg")).unwrap();
    assert_eq!(svg.matches("stroke=\"gray\"").count(), 3 * 4);

    // two CSVs make two side-by-side panels
    let out = pipp(
        &["figure", "mc.csv", "plain.csv", "--out", "both.svg"],
        dir.path(),
    );
    assert!(out.status.success());
    let svg = std::fs::read_to_string(dir.path().join("both.svg")).unwrap();
    assert!(svg.contains("width=\"840\""));
    assert_eq!(svg.matches("<polyline").count(), 4);

    // schema mismatch is a config error
    write(dir.path(), "junk.csv", "a,b,c\n1,2,3\n");
    let out = pipp(&["figure", "junk.csv", "--out", "x.svg"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn paper_suite_tiny_scale_produces_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = pipp(
        &[
            "paper-suite",
            "--out",
            "suite",
            "--scale",
            "0.001",
            "--seed",
            "7",
            "--no-mc",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let names = [
        "S-R005-b100",
        "S-R01-b100",
        "S-R01-b50",
        "S-R015-b50",
        "S-R005-b200",
        "SHC-d0025-R005-b200",
        "DG-R0025-b200",
        "DG-R005-b200",
        "DG-R0075-b200",
        "DG-R015-b50",
        "PS-g2-05-b200",
        "PSHC-g2-05-b200",
        "PS-g2-0-b200",
        "PSHC-g2-0-b200",
    ];
    for name in names {
        assert!(
            dir.path().join(format!("suite/{name}.csv")).exists(),
            "{name}.csv"
        );
        assert!(
            dir.path().join(format!("suite/{name}.svg")).exists(),
            "{name}.svg"
        );
    }
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("suite/manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["configurations"].as_array().unwrap().len(), 14);
    for entry in manifest["configurations"].as_array().unwrap() {
        assert_eq!(entry["status"], "ok");
        assert!(entry["runtime_s"].as_f64().unwrap() >= 0.0);
    }

    // scale outside (0,1] is refused
    let out = pipp(
        &["paper-suite", "--out", "bad", "--scale", "1.5"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn paper_suite_small_mc_run_has_mc_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = pipp(
        &[
            "paper-suite",
            "--out",
            "suite",
            "--scale",
            "0.001",
            "--seed",
            "3",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = std::fs::read_to_string(dir.path().join("suite/S-R01-b100.csv")).unwrap();
    assert!(table.starts_with(
        "gamma1,beta,G,kappa,lambda_ps,lambda_dpp,mc_mean,mc_se,mc_q1,mc_median,mc_q3\n"
    ));
    // paper m-values scale: 10000 -> 10 replicates, 1000 -> 1
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("suite/manifest.json")).unwrap(),
    )
    .unwrap();
    let configs = manifest["configurations"].as_array().unwrap();
    assert_eq!(configs[0]["n_replicates"], 10);
    assert_eq!(configs[5]["n_replicates"], 1);
    assert_eq!(configs[0]["n_steps"], 1000);
}
