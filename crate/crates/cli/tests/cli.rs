//! End-to-end runs of the `tripartite` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tripartite::reduce;
use tripartite_cli::ConfigFile;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.toml"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tripartite")).args(args).output().expect("binary runs")
}

fn run_with_config(args: &[&str], config: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tripartite"))
        .args(args)
        .arg("--config")
        .arg(config)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Csv {
    fn parse(text: &str) -> Self {
        let mut lines = text.lines();
        let header = lines.next().expect("header").split(',').map(String::from).collect();
        let rows = lines
            .map(|l| l.split(',').map(|c| c.parse::<f64>().expect("numeric cell")).collect())
            .collect();
        Self { header, rows }
    }

    fn column(&self, name: &str) -> Vec<f64> {
        let k = self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[k]).collect()
    }
}

/// Runs with `--out` in a fresh directory and returns the CSV and sidecar.
fn run_to_files(args: &[&str], config: &Path) -> (Csv, Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let status = Command::new(env!("CARGO_BIN_EXE_tripartite"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(code(&status), 0, "{}", stderr(&status));
    let csv = Csv::parse(&std::fs::read_to_string(&out).unwrap());
    let side: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out.csv.json")).unwrap()).unwrap();
    (csv, side)
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("config.toml");
    std::fs::write(&path, text).unwrap();
    path
}

const BASE: &str = r#"version = "v1"
[system]
f_c_ghz = 1.0
f_m_ghz = 1.0
f_q_ghz = 2.0
g_c_mhz = 100.0
g_m_mhz = 50.0
[environment]
kappa_mhz = 1.0
gamma_mhz = 1.0
"#;

#[test]
fn uncoupled_cavity_has_one_peak_at_resonance() {
    let (csv, side) = run_to_files(&["spectrum"], &fixture("uncoupled"));
    assert_eq!(csv.header, ["omega_norm", "S_V"]);
    assert_eq!(csv.rows.len(), 4001);
    let peaks = side["peak_positions_norm"].as_array().unwrap();
    assert_eq!(peaks.len(), 1);
    assert!((peaks[0].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(side["manifest"]["subcommand"], "spectrum");
    assert_eq!(side["manifest"]["schema"], "v1");
}

#[test]
fn coupled_beam_splits_the_peak() {
    let (_, side) = run_to_files(&["spectrum"], &fixture("gm-050"));
    let peaks = side["peak_positions_norm"].as_array().unwrap();
    assert_eq!(peaks.len(), 2);
    assert!(peaks[0].as_f64().unwrap() < peaks[1].as_f64().unwrap());
}

#[test]
fn config_problems_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();

    let out = run(&["spectrum", "--config", fixture("gm-050").to_str().unwrap(), "--grid", "1:1:0"]);
    assert_eq!(code(&out), 2, "empty grid: {}", stderr(&out));

    let unknown = write_config(dir.path(), &BASE.replace("gamma_mhz = 1.0", "gamma_mhz = 1.0\nkapa = 2.0"));
    let out = run_with_config(&["spectrum"], &unknown);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unknown field"), "{}", stderr(&out));

    let strong = write_config(dir.path(), &BASE.replace("g_c_mhz = 100.0", "g_c_mhz = 500.0"));
    let out = run_with_config(&["transport"], &strong);
    assert_eq!(code(&out), 2, "regime: {}", stderr(&out));

    let out = run_with_config(&["spectrum", "--model", "full"], &fixture("gm-050"));
    assert_eq!(code(&out), 2);

    let out = run_with_config(&["sweep", "--var", "g_m", "--range", "0:0.1:3", "--observable", "phase"], &fixture("gm-050"));
    assert_eq!(code(&out), 2, "phase without --at");

    let out = run(&["transport", "--config", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn singular_spectrum_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let text = BASE.replace("gamma_mhz = 1.0", "gamma_mhz = 0.0");
    let path = write_config(dir.path(), &text);
    let cfg = ConfigFile::parse(&text).unwrap().resolve().unwrap();
    let em = reduce(&cfg).unwrap();
    // grid endpoint whose angular frequency lands exactly on the lossless beam mode
    let mut x = em.omega_m / cfg.omega_c;
    while x * cfg.omega_c != em.omega_m {
        x = if x * cfg.omega_c < em.omega_m { f64::from_bits(x.to_bits() + 1) } else { f64::from_bits(x.to_bits() - 1) };
    }
    let grid = format!("{x:?}:1.05:101");
    let out = run_with_config(&["spectrum", "--grid", &grid], &path);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("numerical"));
}

#[test]
fn reflection_without_beam_coupling_is_total() {
    let (csv, side) = run_to_files(&["transport"], &fixture("gm-000"));
    assert_eq!(csv.header, ["omega_norm", "re_r", "im_r", "abs_r2", "abs_t2", "phase", "tau_d"]);
    assert!(csv.column("abs_r2").iter().all(|r| (r - 1.0).abs() <= 1e-12));
    assert_eq!(side["dips"].as_array().unwrap().len(), 0);
}

#[test]
fn matched_resonators_give_two_reflection_zeros() {
    let (csv, side) = run_to_files(&["transport"], &fixture("gm-100"));
    assert_eq!(side["zero_reflection"]["kind"], "exact");
    let dips = side["dips"].as_array().unwrap();
    assert_eq!(dips.len(), 2);
    for d in dips {
        assert!(d["reflectance"].as_f64().unwrap() < 1e-6);
    }
    let r2 = csv.column("abs_r2");
    let t2 = csv.column("abs_t2");
    assert!(r2.iter().zip(&t2).all(|(r, t)| (r + t - 1.0).abs() < 1e-12));
}

#[test]
fn full_model_transport_reports_comparison() {
    let (csv, side) = run_to_files(&["transport", "--model", "full"], &fixture("gm-050-lossy-qubit"));
    assert_eq!(csv.rows.len(), 4001);
    assert_eq!(side["manifest"]["model"], "full");
    assert_eq!(side["comparison"]["full_dips"].as_array().unwrap().len(), 2);
    assert!(side["comparison"]["max_deviation"].as_f64().unwrap() > 0.0);
}

#[test]
fn splitting_grows_with_beam_coupling() {
    let (csv, side) = run_to_files(
        &["sweep", "--var", "g_m", "--range", "0.02:0.14:7", "--observable", "splitting"],
        &fixture("gm-100"),
    );
    let split = csv.column("splitting");
    assert_eq!(split.len(), 7);
    assert!(csv.column("n_peaks").iter().all(|&n| n == 2.0));
    assert!(split.windows(2).all(|w| w[1] > w[0]), "{split:?}");
    for (s, p) in split.iter().zip(csv.column("pole_splitting")) {
        assert!((s - p).abs() < 1e-5, "{s} vs {p}");
    }
    assert_eq!(side["manifest"]["sweep"]["variable"], "g_m_ratio");
}

#[test]
fn magnetic_field_switches_the_coupling() {
    let (csv, _) = run_to_files(
        &["sweep", "--var", "B", "--range", "0:0.125:6", "--observable", "splitting"],
        &fixture("symmetric-device"),
    );
    let g = csv.column("g_eff_mhz");
    assert_eq!(g[0], 0.0);
    assert!((g[5].abs() - 10.0).abs() < 1e-6, "{}", g[5]);
    assert!(g.windows(2).all(|w| w[1].abs() > w[0].abs()));
}

#[test]
fn qubit_inversion_moves_the_dips_continuously() {
    let (csv, _) = run_to_files(
        &["sweep", "--var", "sigma_z", "--range", "-1:-0.5:6", "--observable", "dips", "--model", "full"],
        &fixture("gm-050"),
    );
    assert!(csv.column("n_dips").iter().all(|&n| n == 2.0));
    for name in ["dip_lower", "dip_upper"] {
        let pos = csv.column(name);
        assert!(pos.windows(2).all(|w| (w[1] - w[0]).abs() < 5e-3), "{name}: {pos:?}");
        assert!(pos.windows(2).all(|w| w[1] != w[0]), "{name}: {pos:?}");
    }
    let out = run_with_config(&["sweep", "--var", "sigma_z", "--range", "-1:-0.5:3", "--observable", "dips"], &fixture("gm-050"));
    assert_eq!(code(&out), 2, "sigma_z with the effective model");
}

#[test]
fn phase_sweep_reports_group_delay() {
    let (csv, _) = run_to_files(
        &["sweep", "--var", "g_m", "--range", "0:0.1:3", "--observable", "phase", "--at", "0.96"],
        &fixture("gm-100"),
    );
    assert!(csv.column("tau_d").iter().all(|t| t.is_finite()));
    assert!(csv.column("abs_r2").iter().all(|&r| r <= 1.0 + 1e-12));
}

#[test]
fn verify_passes_and_catches_injected_faults() {
    let out = run_with_config(&["verify", "--verify-samples", "20"], &fixture("gm-050"));
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).contains("reflection-full"));

    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("verify.json");
    let out = run_with_config(&["verify", "--verify-samples", "0", "--out", report.to_str().unwrap()], &fixture("gm-100"));
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["reports"].as_array().unwrap().len(), 1);

    for fault in ["effective-coupling", "full-coupling"] {
        let out = run_with_config(&["verify", "--verify-samples", "5", "--inject-fault", fault], &fixture("gm-050"));
        assert_eq!(code(&out), 1, "{fault}: {}", stderr(&out));
    }

    let out = run_with_config(&["transport", "--verify-samples", "3", "--inject-fault", "full-coupling", "--model", "full"], &fixture("gm-050"));
    assert_eq!(code(&out), 1);
}

#[test]
fn stdout_matches_file_output() {
    let out = run_with_config(&["transport"], &fixture("gm-150"));
    assert_eq!(code(&out), 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let status = run_with_config(&["transport", "--out", path.to_str().unwrap()], &fixture("gm-150"));
    assert_eq!(code(&status), 0);
    assert_eq!(out.stdout, std::fs::read(&path).unwrap());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let side = dir.path().join("s.csv.json");
    let mut seen = Vec::new();
    for _ in 0..2 {
        let out = run_with_config(&["sweep", "--var", "g_m", "--range", "0:0.15:4", "--observable", "dips", "--out", path.to_str().unwrap()], &fixture("gm-050"));
        assert_eq!(code(&out), 0);
        seen.push((std::fs::read(&path).unwrap(), std::fs::read(&side).unwrap()));
    }
    assert_eq!(seen[0], seen[1]);
}
