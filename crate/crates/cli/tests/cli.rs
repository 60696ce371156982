use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_xducer"))
}

fn reference_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/erclh.json")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("XDUCER_JOBS").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn feasibility_reference_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["feasibility", "--config", reference_config().to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let q_o = r["nominal"]["q_o"].as_f64().unwrap();
    assert!((q_o - 9.7e7).abs() / 9.7e7 < 0.01, "{q_o}");
    assert!(r["bandwidth"]["hz"].as_f64().unwrap() > 1e6);
    assert_eq!(r["conditions"].as_array().unwrap().len(), 5);

    let out2 = dir.path().join("again.json");
    run(&["feasibility", "--config", reference_config().to_str().unwrap(), "--out", out2.to_str().unwrap()]);
    assert_eq!(fs::read(&out).unwrap(), fs::read(&out2).unwrap());
}

#[test]
fn feasibility_missing_file_is_usage_error() {
    let o = run(&["feasibility", "--config", "/definitely/not/here.json"]);
    assert_eq!(code(&o), 1);
    assert!(!o.stderr.is_empty());
}

#[test]
fn feasibility_tiny_mode_spacing_is_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(reference_config()).unwrap()).unwrap();
    doc["magnon"]["mode_spacing"] = serde_json::json!(1e3);
    let cfg = write(dir.path(), "cfg.json", &doc.to_string());
    let out = dir.path().join("r.json");
    let o = run(&["feasibility", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.exists());
}

#[test]
fn invalid_config_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", r#"{"ion": {}}"#);
    assert_eq!(code(&run(&["feasibility", "--config", cfg.to_str().unwrap()])), 1);
    let junk = write(dir.path(), "junk.json", "not json");
    assert_eq!(code(&run(&["efficiency", "--config", junk.to_str().unwrap()])), 1);
}

#[test]
fn efficiency_spectrum_is_symmetric_with_unit_peak() {
    let o = run(&[
        "efficiency",
        "--config",
        reference_config().to_str().unwrap(),
        "--omega-min=-10MHz",
        "--omega-max",
        "10MHz",
        "--points",
        "1001",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("omega_hz,eta,"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1001);
    let eta: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    let mid: f64 = rows[500][0].parse().unwrap();
    assert_eq!(mid, 0.0);
    assert!((eta[500] - 1.0).abs() < 1e-12);
    for i in 0..eta.len() {
        assert_eq!(eta[i], eta[eta.len() - 1 - i]);
    }
}

#[test]
fn efficiency_rejects_single_point() {
    let o = run(&["efficiency", "--config", reference_config().to_str().unwrap(), "--points", "1"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn match_prints_solution() {
    let o = run(&["match", "--g-mu", "10MHz", "--g-o", "1e7", "--delta-m", "100MHz"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["kappa"]["hz"].as_f64().unwrap() - 2e6).abs() < 1e-3);
    assert!((v["q_mu"].as_f64().unwrap() - 2500.0).abs() < 1e-6);
    assert!((v["q_o"].as_f64().unwrap() - 9.75e7).abs() < 1e-3);
    assert_eq!(code(&run(&["match", "--g-mu", "0", "--g-o", "1e7", "--delta-m", "1e8"])), 1);
    assert_eq!(code(&run(&["match", "--g-mu", "fast", "--g-o", "1e7", "--delta-m", "1e8"])), 1);
}

#[test]
fn sweep_q_o_rises_to_matching() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "s.json",
        r#"{"parameter": "optical_cavity.Q", "values": [1e6, 3e6, 1e7, 3e7, 1e8, 1.8900e8], "outputs": ["eta_peak", "Q_o"]}"#,
    );
    let o = run(&["sweep", "--config", reference_config().to_str().unwrap(), "--spec", spec.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&String::from_utf8(o.stdout).unwrap());
    let eta: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(eta.windows(2).all(|w| w[1] > w[0]), "{eta:?}");
    assert!(eta[5] > 0.9999, "{}", eta[5]);
    assert!(rows.iter().all(|r| r[3].is_empty()));
}

#[test]
fn sweep_pump_power_scales_as_root() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "s.json",
        r#"{"parameter": "drive.pump_power", "values": [0.25, 1, 4], "unit": "uW", "outputs": ["G_oOmega"]}"#,
    );
    let o = run(&["sweep", "--config", reference_config().to_str().unwrap(), "--spec", spec.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&String::from_utf8(o.stdout).unwrap());
    let g: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    for (gi, expect) in g.iter().zip([0.5, 1.0, 2.0]) {
        assert!((gi / g[1] - expect).abs() < 1e-12);
    }
}

#[test]
fn sweep_is_ordered_and_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "s.json",
        r#"{"parameter": "magnon.mode_spacing", "range": {"from": 50e6, "to": 400e6, "count": 16, "scale": "linear"}, "outputs": ["kappa", "xi", "bandwidth", "G_mu"]}"#,
    );
    let args = |jobs: &'static str| {
        bin()
            .args(["sweep", "--config", reference_config().to_str().unwrap(), "--spec", spec.to_str().unwrap(), "--jobs", jobs])
            .output()
            .unwrap()
    };
    let one = args("1");
    let many = args("8");
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, many.stdout);
    let from_env = bin()
        .args(["sweep", "--config", reference_config().to_str().unwrap(), "--spec", spec.to_str().unwrap()])
        .env("XDUCER_JOBS", "3")
        .output()
        .unwrap();
    assert_eq!(one.stdout, from_env.stdout);
    let rows = csv_rows(&String::from_utf8(one.stdout).unwrap());
    let values: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(values[0], 50e6);
    assert_eq!(values[15], 400e6);
}

#[test]
fn sweep_failures() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = reference_config();
    let cfg = cfg.to_str().unwrap();
    let single = write(
        dir.path(),
        "a.json",
        r#"{"parameter": "drive.pump_power", "range": {"from": 1, "to": 2, "count": 1}, "outputs": ["xi"]}"#,
    );
    assert_eq!(code(&run(&["sweep", "--config", cfg, "--spec", single.to_str().unwrap()])), 1);
    let unknown = write(dir.path(), "b.json", r#"{"parameter": "drive.warp", "values": [1, 2], "outputs": ["xi"]}"#);
    assert_eq!(code(&run(&["sweep", "--config", cfg, "--spec", unknown.to_str().unwrap()])), 1);
    let log_neg = write(
        dir.path(),
        "c.json",
        r#"{"parameter": "crystal.rho", "range": {"from": -1, "to": 2, "count": 3, "scale": "log"}, "outputs": ["xi"]}"#,
    );
    assert_eq!(code(&run(&["sweep", "--config", cfg, "--spec", log_neg.to_str().unwrap()])), 1);

    let partial = write(dir.path(), "d.json", r#"{"parameter": "crystal.rho", "values": [-1, 4e27], "outputs": ["xi"]}"#);
    let o = run(&["sweep", "--config", cfg, "--spec", partial.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&String::from_utf8(o.stdout).unwrap());
    assert!(rows[0][1].is_empty() && !rows[0][2].is_empty());
    assert!(rows[1][2].is_empty());

    let all_bad = write(dir.path(), "e.json", r#"{"parameter": "crystal.rho", "values": [-1, -2], "outputs": ["xi"]}"#);
    assert_eq!(code(&run(&["sweep", "--config", cfg, "--spec", all_bad.to_str().unwrap()])), 3);
}

#[test]
fn oracle_modes() {
    let cfg = reference_config();
    let cfg = cfg.to_str().unwrap();
    let o = run(&["oracle", "--config", cfg, "--mode", "scaling"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["exponent"].as_f64().unwrap() + 2.0).abs() < 0.3);

    let o = run(&["oracle", "--config", cfg, "--mode", "three_mode"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], "three_mode");

    let o = run(&["oracle", "--config", cfg, "--mode", "raman"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["result"]["ions"][0]["coupling_rel_error"].as_f64().unwrap() < 1e-3);

    assert_eq!(code(&run(&["oracle", "--config", cfg, "--mode", "lanczos"])), 1);
}

#[test]
fn oracle_raman_without_drive_reports_zero_coupling() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(reference_config()).unwrap()).unwrap();
    doc["drive"]["Omega0"] = serde_json::json!(0.0);
    let cfg = write(dir.path(), "cfg.json", &doc.to_string());
    let o = run(&["oracle", "--config", cfg.to_str().unwrap(), "--mode", "raman"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let ion = &v["result"]["ions"][0];
    assert_eq!(ion["coupling"].as_f64().unwrap().abs(), 0.0);
    assert_eq!(ion["stark"].as_f64().unwrap().abs(), 0.0);
    assert!(v["sweep"].is_null());
}

#[test]
fn help_lists_units() {
    for sub in ["feasibility", "efficiency", "match", "sweep", "oracle"] {
        let o = run(&[sub, "--help"]);
        assert_eq!(code(&o), 0);
        let text = String::from_utf8(o.stdout).unwrap();
        assert!(text.contains("--config"), "{sub}");
    }
    let text = String::from_utf8(run(&["efficiency", "--help"]).stdout).unwrap();
    assert!(text.contains("Hz"));
    let text = String::from_utf8(run(&["match", "--help"]).stdout).unwrap();
    assert!(text.contains("Hz"));
}
