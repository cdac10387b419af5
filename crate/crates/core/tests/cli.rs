use std::path::Path;
use std::process::{Command, Output};

use lightcrystal::io::config::Config;
use lightcrystal::io::output::{read_samples_csv, read_snapshot, SnapshotKind};
use lightcrystal::protocols::{self, ScanOptions, ThresholdScan};

const SMALL: &str = "\
# small grid for fast runs
zeta = 0.2
trap_length = 12
box_length = 16
n_grid = 256
s_left = 40
s_right = 40
";

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lightcrystal"))
        .args(args)
        .env_remove("LIGHTCRYSTAL_OUT")
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.conf");
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &[]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["quench", "--seed", "abc"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn invalid_config_exits_one_with_category() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "zeta = -1\nbogus = 3\n");
    let out = run(dir.path(), &["ground-state", "--config", &config]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error: config:"), "{err}");
    assert!(err.contains("line 1") && err.contains("zeta"), "{err}");
    assert!(err.contains("line 2") && err.contains("bogus"), "{err}");

    let missing = run(dir.path(), &["quench", "--config", "does/not/exist.conf"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error: io:"));
}

#[test]
fn ground_state_writes_snapshots_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL);
    let out = run(dir.path(), &["ground-state", "--config", &config, "--out", "gs"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("converged = 1"), "{stdout}");

    let gs = dir.path().join("gs");
    let psi = read_snapshot(&gs.join("final_psi.bin")).unwrap();
    assert_eq!(psi.kind, SnapshotKind::Wavefunction);
    assert_eq!(psi.data.len(), 256);
    assert!((psi.dx - 16.0 / 256.0).abs() < 1e-15);
    let norm: f64 = psi.data.iter().map(|c| c.norm_sqr()).sum::<f64>() * psi.dx;
    assert!((norm - 1.0).abs() < 1e-10);
    assert_eq!(read_snapshot(&gs.join("final_left.bin")).unwrap().kind, SnapshotKind::LeftField);

    let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(gs.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "ground-state");
    assert_eq!(manifest["params"]["n_grid"], 256);
    let reparsed = Config::parse(manifest["config"].as_str().unwrap()).unwrap();
    assert_eq!(reparsed.params.s_left, 40.0);
}

#[test]
fn out_directory_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &format!("{SMALL}t_final = 0.5\nsample_stride = 100\n"));
    let out = Command::new(env!("CARGO_BIN_EXE_lightcrystal"))
        .args(["quench", "--config", &config])
        .env("LIGHTCRYSTAL_OUT", dir.path().join("from-env"))
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rows = read_samples_csv(&dir.path().join("from-env/samples.csv")).unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0][0], 0.0);
}

#[test]
fn threshold_scan_output_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!("{SMALL}s_values = 6, 10, 14, 18, 22\nresolution = 2\nworkers = 1\n");
    let config = write_config(dir.path(), &body);
    let out = run(dir.path(), &["threshold-scan", "--config", &config, "--out", "scan"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let written: ThresholdScan = serde_json::from_str(&std::fs::read_to_string(dir.path().join("scan/scan.json")).unwrap()).unwrap();

    let cfg = Config::parse(&body).unwrap();
    let options = ScanOptions { resolution: 2.0, workers: 1, ..ScanOptions::default() };
    let direct = protocols::threshold_scan(&cfg.params, &cfg.protocol.s_values, options).unwrap();
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-15 * a.abs().max(b.abs()).max(1e-300);
    assert!(same(written.eta_threshold, direct.eta_threshold));
    assert!(same(written.r_threshold, direct.r_threshold));
    assert_eq!(written.points.len(), direct.points.len());
    for (w, d) in written.points.iter().zip(&direct.points) {
        assert!(same(w.value, d.value) && same(w.eta, d.eta) && same(w.r_abs2, d.r_abs2));
        assert_eq!(w.converged, d.converged);
    }

    let csv = std::fs::read_to_string(dir.path().join("scan/scan.csv")).unwrap();
    assert_eq!(csv.lines().count(), direct.points.len() + 1);
}
