//! End-to-end runs of the compiled binary: output contracts,
//! determinism, config precedence, and the exit-code contract.

use std::path::Path;
use std::process::{Command, Output};

fn rdmft(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rdmft"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let header = reader
        .headers()
        .unwrap()
        .iter()
        .map(str::to_string)
        .collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect();
    (header, rows)
}

#[test]
fn functional_grid_columns_agree_for_n2() {
    let dir = tempfile::tempdir().unwrap();
    let out = rdmft(
        &["functional-grid", "--n", "2", "--grid", "10x12", "--d-min", "1e-3", "--out", "fg.csv"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("fg.csv"));
    assert_eq!(
        header,
        ["gamma_ll", "gamma_lr", "d", "phi", "pure", "ensemble", "analytic", "status"]
    );
    assert_eq!(rows.len(), 120);
    for row in &rows {
        assert_eq!(row[7], "ok");
        let pure: f64 = row[4].parse().unwrap();
        let ensemble: f64 = row[5].parse().unwrap();
        let analytic: f64 = row[6].parse().unwrap();
        assert!((pure - analytic).abs() < 1e-8, "{row:?}");
        assert!(ensemble <= pure + 1e-9, "{row:?}");
    }
}

#[test]
fn functional_grid_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        let out = rdmft(
            &[
                "functional-grid", "--n", "3", "--grid", "6x8", "--seed", "17",
                "--workers", "4", "--out", name,
            ],
            dir.path(),
        );
        assert!(out.status.success());
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b, "same config and seed must give identical bytes");
}

#[test]
fn vrep_map_n4_shows_four_ellipse_levels() {
    let dir = tempfile::tempdir().unwrap();
    let out = rdmft(
        &["vrep-map", "--n", "4", "--grid", "24x32", "--out", "vm.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let (header, rows) = read_csv(&dir.path().join("vm.csv"));
    assert_eq!(header[4], "class_code");
    let mut levels = std::collections::BTreeSet::new();
    for row in &rows {
        let code: u8 = row[4].parse().unwrap();
        assert!(code <= 3);
        if code == 1 {
            levels.insert(row[5].clone());
        } else {
            assert!(row[5].is_empty());
        }
    }
    assert_eq!(levels.len(), 4, "levels seen: {levels:?}");
}

#[test]
fn bec_force_finite_difference_tracks_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = rdmft(
        &[
            "bec-force", "--n", "2", "--grid", "4x8", "--d-min", "1e-6",
            "--d-max", "1e-4", "--out", "bf.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let (_, rows) = read_csv(&dir.path().join("bf.csv"));
    let mut checked = 0;
    for row in &rows {
        let phi: f64 = row[1].parse().unwrap();
        if phi.sin().powi(2) < 0.5 {
            continue;
        }
        let analytic: f64 = row[2].parse().unwrap();
        let fd: f64 = row[3].parse().unwrap();
        assert!(
            (fd - analytic).abs() < 0.02 * analytic.abs(),
            "{row:?}"
        );
        checked += 1;
    }
    assert!(checked >= 8);
}

#[test]
fn energy_min_reports_small_ed_discrepancies() {
    let dir = tempfile::tempdir().unwrap();
    let out = rdmft(
        &[
            "energy-min", "--n", "4", "--t", "1", "--u", "0.1",
            "--grid", "10x16", "--out", "em.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("em.json")).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["boundary_pinned"], false);
    let de = doc["discrepancies"]["energy_error"].as_f64().unwrap();
    let dr = doc["discrepancies"]["rdm_distance"].as_f64().unwrap();
    assert!(de < 1e-6, "energy error {de}");
    assert!(dr < 1e-3, "rdm distance {dr}");
    assert!((doc["n_bec"].as_f64().unwrap() - doc["n_bec_prediction"].as_f64().unwrap()).abs() < 0.01);
}

#[test]
fn bogoliubov_gap_stays_tight() {
    let dir = tempfile::tempdir().unwrap();
    let out = rdmft(
        &["bogoliubov", "--points", "32", "--nw0", "2.5", "--out", "bg.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let (_, rows) = read_csv(&dir.path().join("bg.csv"));
    assert_eq!(rows.len(), 32);
    for row in &rows {
        let gap: f64 = row[4].parse().unwrap();
        assert!(gap <= 1e-10);
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "n = 2\ngrid = \"6x8\"\nd_min = 1e-3\nseed = 5\n",
    )
    .unwrap();
    // File value used when no flag is given.
    let out = rdmft(
        &["functional-grid", "--config", "run.toml", "--out", "file.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let (_, rows) = read_csv(&dir.path().join("file.csv"));
    assert_eq!(rows.len(), 48);
    // Flag wins over the file.
    let out = rdmft(
        &[
            "functional-grid", "--config", "run.toml", "--grid", "4x6",
            "--out", "flag.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let (_, rows) = read_csv(&dir.path().join("flag.csv"));
    assert_eq!(rows.len(), 24);
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    // Usage: degenerate resolution.
    let out = rdmft(&["functional-grid", "--grid", "1x1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    // Usage: malformed grid spec.
    let out = rdmft(&["functional-grid", "--grid", "abc"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    // Usage: unknown format.
    let out = rdmft(
        &["functional-grid", "--grid", "4x4", "--format", "xml"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    // Usage: unknown flag (clap).
    let out = rdmft(&["functional-grid", "--bogus"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    // Usage: D range outside the disc.
    let out = rdmft(
        &["functional-grid", "--grid", "4x4", "--d-max", "0.7"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    // Success writes to stdout when --out is omitted.
    let out = rdmft(&["bogoliubov", "--points", "4"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("eps,"));
}
