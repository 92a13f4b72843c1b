use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gqfi::cli::{read_sweep_csv, RunManifest};
use gqfi::montecarlo::FitResult;

fn gqfi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gqfi"))
        .args(args)
        .env_remove("GQFI_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn bounds_tables() {
    let out = gqfi(&["bounds", "--curve", "upper-single", "--range", "0:2:1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "x,value\n0,2\n1,10\n2,26\n");
    let out = gqfi(&["bounds", "--curve", "coherent-max", "--range", "0:1:1"]);
    assert_eq!(stdout(&out), "x,value\n0,2\n1,6\n");
    let out = gqfi(&["bounds", "--curve", "separable-max", "--range", "1:1:1"]);
    assert_eq!(stdout(&out), "x,value\n1,4.66666667\n");
}

#[test]
fn entangled_bounds_run_over_negativity() {
    let tmsv_point = -(3.0 - 8f64.sqrt()).ln();
    let range = format!("0:{tmsv_point}:{tmsv_point}");
    let out = gqfi(&[
        "bounds",
        "--curve",
        "entangled-vs-negativity",
        "--n-a",
        "1",
        "--range",
        &range,
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[1], "0,4.66666667");
    assert!(rows[2].ends_with(",10"), "{text}");
    let missing = gqfi(&["bounds", "--curve", "entangled-vs-negativity", "--range", "0:1:1"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn malformed_range_is_a_config_error() {
    let out = gqfi(&["bounds", "--curve", "upper-single", "--range", "0:2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = gqfi(&["bounds", "--curve", "nonsense", "--range", "0:2:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thermal_sample_rows() {
    let out = gqfi(&[
        "sample",
        "--class",
        "single-thermal",
        "--n-a",
        "1",
        "--count",
        "3",
        "--seed",
        "7",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "index,class,n_a,avg_qfi,coherence,log_negativity,param_json,seed"
    );
    assert_eq!(lines.len(), 4);
    for (k, line) in lines[1..].iter().enumerate() {
        assert!(line.starts_with(&format!("{k},single-thermal,1,3.6,0,,")), "{line}");
    }
}

#[test]
fn tmsv_sample_row() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("tmsv.csv");
    let out = gqfi(&[
        "sample",
        "--class",
        "tmsv",
        "--n-a",
        "1",
        "--count",
        "1",
        "--out",
        p(&csv),
    ]);
    assert!(out.status.success());
    let rows = read_sweep_csv(&csv).unwrap();
    assert_eq!(rows.len(), 1);
    assert!((rows[0].log_negativity.unwrap() - 1.76275).abs() < 1e-5);
    assert!((rows[0].avg_qfi - 10.0).abs() < 1e-3);
    assert!(rows[0].coherence.is_none());
}

#[test]
fn reruns_are_byte_identical_and_manifested() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = [
        "sample",
        "--class",
        "single-general",
        "--n-a",
        "2",
        "--count",
        "40",
        "--seed",
        "3",
    ];
    assert!(gqfi(&[&args[..], &["--out", p(&a), "--workers", "1"]].concat())
        .status
        .success());
    assert!(gqfi(&[&args[..], &["--out", p(&b), "--workers", "4"]].concat())
        .status
        .success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let manifest: RunManifest =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.seed, Some(3));
    assert_eq!(manifest.outputs["a.csv"], gqfi::cli::output::sha256_file(&a).unwrap());
    assert!(manifest.class_ranges.is_some());
}

#[test]
fn workers_env_var_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_gqfi"))
        .args(["bounds", "--curve", "upper-single", "--range", "0:1:1"])
        .env("GQFI_WORKERS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_presets_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# preset\nclass = single-thermal\nn-a = 2\ncount = 5\nseed = 1\n").unwrap();
    let out = gqfi(&["--config", p(&cfg), "sample", "--count", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(1).unwrap().starts_with("0,single-thermal,2,"));

    fs::write(&cfg, "bogus_key = 1\n").unwrap();
    let out = gqfi(&[
        "--config",
        p(&cfg),
        "bounds",
        "--curve",
        "upper-single",
        "--range",
        "0:1:1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = gqfi(&[
        "--config",
        p(&dir.path().join("missing.conf")),
        "bounds",
        "--curve",
        "upper-single",
        "--range",
        "0:1:1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn io_failures_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = gqfi(&["fit", "--input", p(&dir.path().join("absent.csv"))]);
    assert_eq!(out.status.code(), Some(4));
}

/// Points on the curve at the midpoints of `bins` bins over `[0, 2]`, with
/// outliers above it pinning the bin edges.
fn write_synthetic(path: &Path, bins: usize, a1: f64, a2: f64, b1: f64) {
    let mut text = String::from("index,class,n_a,avg_qfi,coherence,log_negativity,param_json,seed\n");
    let f = |x: f64| a1 * (b1 * x).exp() + a2;
    let mut points = vec![(0.0, 1e3), (2.0, 1e3)];
    for k in 0..bins {
        let mid = 2.0 * (k as f64 + 0.5) / bins as f64;
        points.push((mid, f(mid)));
        points.push((mid + 0.01, f(mid) + 1.0));
    }
    for (k, (x, y)) in points.iter().enumerate() {
        text.push_str(&format!("{k},entangled-standard,3,{y:.17e},,{x:.17e},{{}},0\n"));
    }
    fs::write(path, text).unwrap();
}

#[test]
fn fit_recovers_synthetic_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("synthetic.csv");
    let json = dir.path().join("fit.json");
    write_synthetic(&csv, 20, 0.169, 1.778, 2.187);
    let out = gqfi(&["fit", "--input", p(&csv), "--bins", "20", "--out", p(&json)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let fit: FitResult = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert!((fit.A1 - 0.169).abs() < 1e-6, "{fit:?}");
    assert!((fit.A2 - 1.778).abs() < 1e-6, "{fit:?}");
    assert!((fit.B1 - 2.187).abs() < 1e-6, "{fit:?}");
    assert!(fit.mse < 1e-12);
    assert_eq!(fit.n_a, 3.0);
    assert_eq!(fit.n_points, 20);
    assert!(dir.path().join("fit.json.manifest.json").exists());
}

#[test]
fn fit_with_too_few_points_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("few.csv");
    fs::write(
        &csv,
        "index,class,n_a,avg_qfi,coherence,log_negativity,param_json,seed\n\
         0,entangled-standard,3,5,,0.1,{},0\n1,entangled-standard,3,6,,0.5,{},0\n2,entangled-standard,3,7,,0.9,{},0\n",
    )
    .unwrap();
    let out = gqfi(&["fit", "--input", p(&csv)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn starved_oracle_cutoff_exits_5() {
    let out = gqfi(&["oracle-check", "--cutoff", "8"]);
    assert_eq!(out.status.code(), Some(5));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = report.as_array().unwrap();
    assert!(rows.len() >= 12);
    assert!(rows
        .iter()
        .any(|r| r["error"].as_str().is_some_and(|e| e.contains("too small"))));
}

#[test]
fn figure_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let f2 = dir.path().join("f2");
    let out = gqfi(&[
        "figure",
        "--id",
        "2",
        "--count",
        "40",
        "--seed",
        "1",
        "--out-dir",
        p(&f2),
    ]);
    assert!(out.status.success());
    for name in [
        "scatter_single-general.csv",
        "bound_upper-single.csv",
        "bound_lower-single.csv",
        "bound_coherent-max.csv",
        "plot.gp",
        "figure-2.manifest.json",
    ] {
        assert!(f2.join(name).exists(), "{name}");
    }
    assert_eq!(
        read_sweep_csv(&f2.join("scatter_single-general.csv")).unwrap().len(),
        40
    );

    let f5 = dir.path().join("f5");
    assert!(gqfi(&["figure", "--id", "5", "--count", "20", "--out-dir", p(&f5)])
        .status
        .success());
    assert!(f5.join("bound_separable-max.csv").exists());

    assert_eq!(gqfi(&["figure", "--id", "9"]).status.code(), Some(2));
}
