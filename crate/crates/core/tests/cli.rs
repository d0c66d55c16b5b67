use std::path::Path;
use std::process::{Command, Output};

use lgsim::cli::{read_records, ExtremaRecord, Format, OutputRecord, SurfaceRecord};

const RTN_NM: &[&str] = &["--channel", "rtn", "--a", "0.05", "--tau", "500"];

fn lgsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lgsim"))
        .args(args)
        .env_remove("LGSIM_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn with(base: &[&str], extra: &[&str]) -> Vec<String> {
    base.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn run(cmd: &str, base: &[&str], extra: &[&str]) -> Output {
    let mut args = vec![cmd.to_string()];
    args.extend(with(base, extra));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    lgsim(&refs)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn telegraph_sweep_has_one_row_per_step_and_violates() {
    let out = run("sweep", RTN_NM, &["--theta", "pi/2", "--dt-range", "0:3000:500"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<OutputRecord> = read_records(&stdout(&out), Format::Csv).unwrap();
    assert_eq!(rows.len(), 500);
    assert!(rows.iter().all(|r| r.dt > 0.0 && r.regime == "non-markovian"));
    assert!(rows.iter().map(|r| r.k3).fold(f64::MIN, f64::max) > 1.0);
}

#[test]
fn sweep_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<_> = (0..2)
        .map(|i| {
            let path = dir.path().join(format!("run{i}.jsonl"));
            let out = run(
                "sweep",
                RTN_NM,
                &[
                    "--theta-range", "0:pi:7", "--phi-range", "-pi/2:pi/2:3",
                    "--dt-range", "0:50:40", "--method", "chain", "--seed", "9",
                    "--format", "jsonl", "--out", path.to_str().unwrap(),
                ],
            );
            assert_eq!(out.status.code(), Some(0));
            std::fs::read(&path).unwrap()
        })
        .collect();
    assert_eq!(files[0], files[1]);
    assert_eq!(String::from_utf8(files[0].clone()).unwrap().lines().count(), 7 * 3 * 40 + 1);
}

#[test]
fn two_tiny_steps_stay_near_one() {
    let out = run("sweep", RTN_NM, &["--dt-range", "0:2e-6", "--steps", "2"]);
    let rows: Vec<OutputRecord> = read_records(&stdout(&out), Format::Csv).unwrap();
    assert_eq!(rows.len(), 2);
    assert!((rows[0].dt - 1e-6).abs() < 1e-18);
    for r in rows {
        assert!((r.k3 - 1.0).abs() < 1e-9, "{}", r.k3);
    }
}

#[test]
fn invalid_config_exits_one_with_field() {
    let out = run("sweep", RTN_NM, &["--dt-range", "3:1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dt-range"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "channel = rtn\na = 0.05\n\ntua = 500\n").unwrap();
    let out = lgsim(&["sweep", "--config", cfg.to_str().unwrap(), "--dt-range", "0:1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
}

#[test]
fn config_file_values_are_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# telegraph\nchannel = rtn\na = 0.05\ntau = 500\ndt-range = 0:10:5\n").unwrap();
    let out = lgsim(&["sweep", "--config", cfg.to_str().unwrap(), "--dt-range", "0:10:4"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<OutputRecord> = read_records(&stdout(&out), Format::Csv).unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0].p2, 0.001);
}

#[test]
fn unwritable_output_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    let out = run("sweep", RTN_NM, &["--dt-range", "0:1", "--out", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_dir_env_names_default_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_lgsim"))
        .args(["extrema", "--channel", "oun", "--Gamma", "0.1", "--gamma", "0.01", "--dt-range", "0:200"])
        .env("LGSIM_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("extrema.csv")).unwrap();
    let rows: Vec<ExtremaRecord> = read_records(&text, Format::Csv).unwrap();
    assert_eq!(rows.len(), 1);
}

#[test]
fn ou_extrema_single_row() {
    let out = run("extrema", &["--channel", "oun", "--Gamma", "0.1", "--gamma", "0.01"], &["--dt-range", "0:200"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<ExtremaRecord> = read_records(&stdout(&out), Format::Csv).unwrap();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].is_max && rows[0].stationary && rows[0].residual < 1e-9);
}

#[test]
fn flat_markovian_extrema_report_none() {
    let out = run("extrema", &["--channel", "rtn", "--a", "0.05", "--tau", "0.5"], &["--dt-range", "5:50"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<ExtremaRecord> = read_records(&stdout(&out), Format::Csv).unwrap();
    assert!(rows.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no extrema"));
}

#[test]
fn oscillating_extrema_on_nu_axis() {
    let out = run("extrema", RTN_NM, &["--time-axis", "nu", "--dt-range", "0:1", "--format", "jsonl"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<ExtremaRecord> = read_records(&stdout(&out), Format::Jsonl).unwrap();
    assert!(rows.len() > 10);
    for r in &rows {
        assert!(r.residual < 1e-9 && r.dt > 0.0 && r.dt <= 1.0 && r.time_axis == "nu");
    }
}

#[test]
fn unitary_extrema_is_a_config_error() {
    let out = run("extrema", &["--channel", "unitary", "--Omega", "1"], &["--dt-range", "0:1"]);
    assert_eq!(out.status.code(), Some(1));
}

fn surface_rows(extra: &[&str]) -> Vec<SurfaceRecord> {
    let out = run("surface", RTN_NM, extra);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    read_records(&stdout(&out), Format::Csv).unwrap()
}

#[test]
fn surface_peaks_on_equator() {
    let rows = surface_rows(&["--theta-range", "-pi:pi:37", "--phi-range", "-pi/2:pi/2:5", "--dt-range", "0:24:2"]);
    let best: Vec<_> = rows.iter().filter(|r| r.argmax).collect();
    assert_eq!(best.len(), 1);
    let cell = 2.0 * std::f64::consts::PI / 36.0;
    assert!((best[0].theta.abs() - std::f64::consts::FRAC_PI_2).abs() <= cell);
    for r in rows.iter().filter(|r| r.theta == 0.0) {
        assert!((r.k3 - 1.0).abs() < 1e-12);
    }
}

#[test]
fn surface_is_flat_in_phi_through_the_chain() {
    let rows = surface_rows(&[
        "--theta-range", "-pi:pi:9", "--phi-range", "-pi/2:pi/2:9",
        "--dt-range", "0:30:3", "--method", "chain",
    ]);
    for theta_line in rows.chunks(9 * 3) {
        for k in 0..3 {
            let ks: Vec<f64> = theta_line.iter().skip(k).step_by(3).map(|r| r.k3).collect();
            let spread = ks.iter().cloned().fold(f64::MIN, f64::max) - ks.iter().cloned().fold(f64::MAX, f64::min);
            assert!(spread < 1e-10, "{spread}");
        }
    }
}

#[test]
fn surface_without_phi_range_is_rejected() {
    let out = run("surface", RTN_NM, &["--theta-range", "0:pi:3", "--dt-range", "0:1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_check_passes_and_reports() {
    let out = run("oracle-check", RTN_NM, &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("cases = 200"));
    let dev: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("max_abs_deviation = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(dev < 1e-10);

    let empty = run("oracle-check", RTN_NM, &["--samples", "0"]);
    assert_eq!(empty.status.code(), Some(0));
    assert!(stdout(&empty).contains("cases = 0"));
}

#[test]
fn oracle_check_unitary_equator() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("oracle.csv");
    let out = run(
        "oracle-check",
        &["--channel", "unitary", "--Omega", "1.3"],
        &["--theta", "pi/2", "--samples", "50", "--out", path.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<lgsim::cli::OracleRecord> =
        read_records(&std::fs::read_to_string(Path::new(&path)).unwrap(), Format::Csv).unwrap();
    assert_eq!(rows.len(), 50);
    for r in rows {
        assert!((r.chain - (1.3 * (r.tj - r.ti)).cos()).abs() < 1e-9);
    }
}
