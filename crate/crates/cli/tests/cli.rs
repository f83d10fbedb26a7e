//! End-to-end tests of the command-line interface, driving the real
//! binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dicentra"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("dicentra-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn classify_reports_families_and_exit_codes() {
    // Dual satellitary parameters.
    let out = run(&["classify", "--h", "0.8", "--g", "0.2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("class: t_ds"), "got: {text}");

    // Satellitary region reports both zones.
    let out = run(&["classify", "--h", "-0.5", "--g", "0.0"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("second orbit"));

    // Forbidden region: distinct exit code.
    let out = run(&["classify", "--h", "0.5", "--g", "-1.0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("class: forbidden"));

    // Critical curve: distinct exit code.
    let out = run(&["classify", "--h", "1.0", "--g", "2.0"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).contains("class: critical"));
}

#[test]
fn classify_accepts_raw_invariant_chart() {
    // Omega = sqrt(3)*(-0.27), G = 0.8/sqrt(3) is the same point as
    // (h, g) = (-0.27, 0.8) at theta_f = pi/6.
    let s3 = 3.0_f64.sqrt();
    let out = run(&[
        "classify",
        "--omega",
        &format!("{}", -0.27 * s3),
        "--gsep",
        &format!("{}", 0.8 / s3),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("class: t_p"));

    // Mixing charts is a usage fault.
    let out = run(&[
        "classify", "--h", "0.1", "--g", "0.2", "--omega", "0.3", "--gsep", "0.1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn orbit_csv_is_deterministic_and_on_sphere() {
    let args = [
        "orbit",
        "--h",
        "-0.27",
        "--g",
        "0.8",
        "--su0",
        "0",
        "--sv0",
        "0",
        "--samples",
        "1000",
        "--zeta-max",
        "70",
    ];
    let first = run(&args);
    assert!(first.status.success());
    let second = run(&args);
    assert_eq!(
        first.stdout, second.stdout,
        "byte-identical output for identical config"
    );

    let text = stdout(&first);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("zeta,t,X,Y,Z,U,V"));
    let mut rows = 0;
    for line in lines {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 7);
        let r2 = fields[2] * fields[2] + fields[3] * fields[3] + fields[4] * fields[4];
        assert!((r2 - 1.0).abs() < 1e-10, "row off the sphere: {line}");
        rows += 1;
    }
    assert_eq!(rows, 1000);
}

#[test]
fn orbit_two_sample_window_and_json() {
    let out = run(&[
        "orbit",
        "--h",
        "0.25",
        "--g",
        "1.0",
        "--samples",
        "2",
        "--zeta-max",
        "1.0",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 3); // header + 2 rows

    let out = run(&[
        "orbit",
        "--h",
        "0.25",
        "--g",
        "1.0",
        "--samples",
        "3",
        "--zeta-max",
        "1.0",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["samples"].as_array().unwrap().len(), 3);
    assert!(doc["spec"]["class"].is_object() || doc["spec"]["class"].is_string());
}

#[test]
fn orbit_rejects_forbidden_and_bad_usage() {
    let out = run(&["orbit", "--h", "0.5", "--g", "-1.0"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["orbit", "--h", "0.25", "--g", "1.0", "--samples", "1"]);
    assert_eq!(out.status.code(), Some(1)); // engine rejects n < 2
    let out = run(&[
        "orbit",
        "--h",
        "0.25",
        "--g",
        "1.0",
        "--zeta-min",
        "5",
        "--zeta-max",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn no_partial_output_on_error() {
    let path = tmp_path("forbidden.csv");
    let _ = std::fs::remove_file(&path);
    let out = run(&[
        "orbit",
        "--h",
        "0.5",
        "--g",
        "-1.0",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!path.exists(), "no file must be written on error");
}

#[test]
fn grid_smoke_window() {
    let out = run(&[
        "grid", "--h-min", "-1", "--h-max", "2", "--g-min", "-1.5", "--g-max", "2.5", "--nx", "10",
        "--ny", "10",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("h,g,class,subtype,flags"));
    assert_eq!(lines.count(), 100);
    assert!(text.contains(",t_p,"));
    assert!(text.contains(",forbidden,"));
}

#[test]
fn closed_reproduces_meridian_planetary_figure() {
    // 2T_u = 3T_v at h = 1.5 closes near g = 0.47580.
    let out = run(&[
        "closed",
        "--ratio-p",
        "2",
        "--ratio-q",
        "3",
        "--h",
        "1.5",
        "--family",
        "t_mp",
        "--bracket",
        "0.3:0.49",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let g = doc["g"].as_f64().unwrap();
    assert!((g - 0.47580).abs() < 2e-4, "g = {g}");
    let tu = doc["t_u"].as_f64().unwrap();
    let tv = doc["t_v"].as_f64().unwrap();
    assert!((2.0 * tu - 3.0 * tv).abs() < 1e-8 * tu);
}

#[test]
fn closed_orbit_closes_over_common_period() {
    // Lemniscatic T_u = T_v resonance at h = -0.2 (g near 0.29835),
    // sampled over one common period: endpoints must coincide.
    let out = run(&[
        "closed",
        "--ratio-p",
        "1",
        "--ratio-q",
        "1",
        "--h",
        "-0.2",
        "--family",
        "t_l",
        "--subtype",
        "1",
        "--bracket",
        "0.2:0.7",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let g = doc["g"].as_f64().unwrap();
    assert!((g - 0.29835).abs() < 2e-4, "g = {g}");
    let period = doc["t_u"].as_f64().unwrap(); // p = 1

    let out = run(&[
        "orbit",
        "--h",
        "-0.2",
        "--g",
        &format!("{g:.17}"),
        "--su0",
        "3",
        "--sv0",
        "0",
        "--samples",
        "2",
        "--zeta-max",
        &format!("{period:.17}"),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    let parse = |row: &str| -> Vec<f64> { row.split(',').map(|f| f.parse().unwrap()).collect() };
    let (a, b) = (parse(rows[0]), parse(rows[1]));
    let gap = ((a[2] - b[2]).powi(2) + (a[3] - b[3]).powi(2) + (a[4] - b[4]).powi(2)).sqrt();
    assert!(gap < 1e-8, "closure gap {gap:e}");
}

#[test]
fn verify_passes_on_figure_orbit_and_respects_env_tolerance() {
    let out = run(&[
        "verify",
        "--h",
        "0.25",
        "--g",
        "1.0",
        "--su0",
        "0",
        "--sv0",
        "0",
        "--zeta-max",
        "5",
        "--samples",
        "60",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["passed"], serde_json::Value::Bool(true));

    // An impossible tolerance via the environment flips the exit code.
    let out = bin()
        .args([
            "verify",
            "--h",
            "0.25",
            "--g",
            "1.0",
            "--zeta-max",
            "5",
            "--samples",
            "60",
        ])
        .env("DICENTRA_TOL", "1e-18")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn config_file_key_value_and_json() {
    let path = tmp_path("orbit.conf");
    std::fs::write(
        &path,
        "# figure 6(h) parameters\nh = 0.8\ng = 0.2\nsu0 = 1\nsv0 = 2\nsamples = 4\nzeta_max = 2.0\n",
    )
    .unwrap();
    let from_file = run(&["orbit", "--config", path.to_str().unwrap()]);
    assert!(
        from_file.status.success(),
        "{}",
        String::from_utf8_lossy(&from_file.stderr)
    );
    let from_flags = run(&[
        "orbit",
        "--h",
        "0.8",
        "--g",
        "0.2",
        "--su0",
        "1",
        "--sv0",
        "2",
        "--samples",
        "4",
        "--zeta-max",
        "2.0",
    ]);
    assert_eq!(from_file.stdout, from_flags.stdout);

    // Flags override file values.
    let overridden = run(&[
        "orbit",
        "--config",
        path.to_str().unwrap(),
        "--samples",
        "6",
    ]);
    assert_eq!(stdout(&overridden).lines().count(), 7);

    // JSON form of the same config.
    let json_path = tmp_path("orbit.json");
    std::fs::write(
        &json_path,
        r#"{"h": 0.8, "g": 0.2, "su0": 1, "sv0": 2, "samples": 4, "zeta_max": 2.0}"#,
    )
    .unwrap();
    let from_json = run(&["orbit", "--config", json_path.to_str().unwrap()]);
    assert_eq!(from_json.stdout, from_file.stdout);

    let _ = std::fs::remove_file(&path);
    let _ = std::fs::remove_file(&json_path);
}

#[test]
fn malformed_config_is_a_usage_fault_with_diagnostics() {
    let path = tmp_path("bad.conf");
    std::fs::write(&path, "h = 0.8\nnot a key value pair\n").unwrap();
    let out = run(&["orbit", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(":2:"), "diagnostic names the line: {err}");

    std::fs::write(&path, "hh = 0.8\n").unwrap();
    let out = run(&["orbit", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));

    std::fs::write(&path, "h = zebra\n").unwrap();
    let out = run(&["orbit", "--config", path.to_str().unwrap(), "--g", "0.2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid number"));
    let _ = std::fs::remove_file(&path);
}

#[test]
fn explicit_strengths_match_relative_strength() {
    // Everything emitted is nondimensional, so (gamma1, gamma2) = (2, 1)
    // and gamma = 1/3 must produce byte-identical trajectories.
    let by_ratio = run(&[
        "orbit",
        "--h",
        "0.8",
        "--g",
        "0.2",
        "--samples",
        "5",
        "--zeta-max",
        "2",
    ]);
    let by_strengths = run(&[
        "orbit",
        "--gamma1",
        "2",
        "--gamma2",
        "1",
        "--h",
        "0.8",
        "--g",
        "0.2",
        "--samples",
        "5",
        "--zeta-max",
        "2",
    ]);
    assert!(
        by_strengths.status.success(),
        "{}",
        String::from_utf8_lossy(&by_strengths.stderr)
    );
    assert_eq!(by_ratio.stdout, by_strengths.stdout);

    // Inconsistent pairing is a usage fault.
    let out = run(&["orbit", "--gamma1", "2", "--h", "0.8", "--g", "0.2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transposed_closed_solve_accepts_fixed_g() {
    let out = run(&[
        "closed",
        "--ratio-p",
        "1",
        "--ratio-q",
        "1",
        "--g",
        "0.23559",
        "--family",
        "t_ds",
        "--bracket",
        "0.45:0.8",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((doc["h"].as_f64().unwrap() - 0.6).abs() < 1e-3);
}

#[test]
fn satellitary_zone_selection() {
    let zone1 = run(&[
        "orbit",
        "--h",
        "-0.5",
        "--g",
        "0.0",
        "--samples",
        "3",
        "--zeta-max",
        "1",
        "--format",
        "json",
    ]);
    assert!(zone1.status.success());
    let zone2 = run(&[
        "orbit",
        "--h",
        "-0.5",
        "--g",
        "0.0",
        "--samples",
        "3",
        "--zeta-max",
        "1",
        "--format",
        "json",
        "--zone",
        "2",
    ]);
    assert!(
        zone2.status.success(),
        "{}",
        String::from_utf8_lossy(&zone2.stderr)
    );
    let d1: serde_json::Value = serde_json::from_str(&stdout(&zone1)).unwrap();
    let d2: serde_json::Value = serde_json::from_str(&stdout(&zone2)).unwrap();
    assert_ne!(d1["spec"]["block"], d2["spec"]["block"]);
}
