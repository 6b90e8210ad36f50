//! Exercises the command-line surface: JSON reports, CSV schemas, config
//! overrides, exit codes, and cross-command consistency.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pulseglide"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("CLI should spawn")
}

fn stdout_json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout should be JSON")
}

fn tmp(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn equilibrium_reports_the_force_balance() {
    let report = stdout_json(&["equilibrium", "--speed", "15"]);
    let force = report["force_n"].as_f64().unwrap();
    assert!((force - 230.80545).abs() < 1e-5);
    assert!((report["power_w"].as_f64().unwrap() - 15.0 * force).abs() < 1e-9);
    assert_eq!(report["lambda2"].as_f64().unwrap(), 0.0);
    assert!(report["weight_c_g_per_m"].as_f64().unwrap() > 0.0);
    assert!(report["steady_cost_g_per_s"].as_f64().unwrap() < 0.0);
}

#[test]
fn vcrit_lands_in_the_expected_band() {
    let report = stdout_json(&["vcrit"]);
    let v = report["v_crit_mps"].as_f64().unwrap();
    assert!((33.0..=34.5).contains(&v), "v_crit = {v}");
}

#[test]
fn config_overrides_change_the_answer() {
    let cfg = tmp("heavy.json");
    std::fs::write(&cfg, r#"{"vehicle": {"mass_kg": 2200.0}}"#).unwrap();
    let base = stdout_json(&["equilibrium", "--speed", "15"]);
    let heavy = stdout_json(&["--config", cfg.to_str().unwrap(), "equilibrium", "--speed", "15"]);
    assert!(
        heavy["force_n"].as_f64().unwrap() > base["force_n"].as_f64().unwrap(),
        "a heavier car needs more traction force"
    );
}

#[test]
fn locus_csv_has_the_documented_schema() {
    let csv = tmp("locus35.csv");
    let out = run(&[
        "locus",
        "--speed", "35",
        "--points", "50",
        "--out-csv", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "R,re1,im1,re2,im2,re3,im3,re4,im4,class"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 50);
    // Above the critical speed every weight leaves an unstable mode.
    for row in &rows {
        assert!(row.ends_with(",Unstable"), "unexpected class in {row}");
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 10);
        // Numeric fields parse back.
        for f in &fields[..9] {
            f.parse::<f64>().unwrap();
        }
    }
}

#[test]
fn rcrit_sweep_leaves_failed_speeds_empty() {
    let csv = tmp("rcrit.csv");
    let out = run(&[
        "rcrit",
        "--v-min", "32",
        "--v-max", "36",
        "--step", "1",
        "--out-csv", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "v_mps,r_crit,omega_rad_s,period_s");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    // 32 and 33 m/s are capable; 34 through 36 are not and emit empty fields.
    assert!(!rows[0].contains(",,"), "32 m/s should have a critical weight: {}", rows[0]);
    for row in &rows[2..] {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(&fields[1..], &["", "", ""], "expected empty fields in {row}");
    }
}

#[test]
fn optimize_then_simulate_round_trips_byte_identically() {
    let json = tmp("opt.json");
    let opt_csv = tmp("opt.csv");
    let sim_csv = tmp("sim.csv");
    let out = run(&[
        "optimize",
        "--speed", "15",
        "--steps", "1024",
        "--out-json", json.to_str().unwrap(),
        "--out-csv", opt_csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(report["converged"].as_bool().unwrap());
    assert!(
        report["cost"]["total_g_per_s"].as_f64().unwrap()
            < report["cost"]["steady_g_per_s"].as_f64().unwrap()
    );

    // Feeding the result JSON back through the simulator reproduces the
    // trajectory CSV byte for byte.
    let out = run(&[
        "simulate",
        "--input", json.to_str().unwrap(),
        "--steps", "1024",
        "--out-csv", sim_csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let a = std::fs::read(&opt_csv).unwrap();
    let b = std::fs::read(&sim_csv).unwrap();
    assert!(!a.is_empty() && a == b, "round-trip CSVs differ");

    let text = String::from_utf8(a).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "t_s,x1_mps,x2_N,u_Nps,power_W,fuel_gps"
    );
    assert_eq!(text.lines().count(), 1026);
}

#[test]
fn simulate_accepts_a_bare_decision_document() {
    let doc = tmp("decision.json");
    std::fs::write(
        &doc,
        r#"{"x1_0": 15.0, "x2_0": 230.0, "omega": 0.05, "a": [0.0], "b": [5.0]}"#,
    )
    .unwrap();
    let csv = tmp("bare.csv");
    let out = run(&[
        "simulate",
        "--input", doc.to_str().unwrap(),
        "--steps", "64",
        "--out-csv", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 66);
}

#[test]
fn svg_outputs_are_valid_markup() {
    let svg = tmp("locus.svg");
    let out = run(&[
        "locus",
        "--speed", "25",
        "--points", "40",
        "--svg", svg.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert!(text.trim_end().ends_with("</svg>"));
    assert!(text.contains("oscillatory") && text.contains("unstable"));
}

#[test]
fn cheap_commands_are_deterministic_across_runs() {
    for args in [
        vec!["equilibrium", "--speed", "21.5"],
        vec!["vcrit"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success() && b.status.success());
        assert!(a.stdout == b.stdout, "{args:?} printed different bytes");
    }
}

#[test]
fn usage_errors_exit_1_and_runtime_errors_exit_2() {
    // Unknown flag: argument parsing failure.
    let out = run(&["equilibrium", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));

    // Help and version are successes.
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));

    // Missing input file: runtime failure with a diagnostic.
    let out = run(&["simulate", "--input", "/nonexistent/decision.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    // Unknown config key: runtime failure naming the key.
    let cfg = tmp("typo.json");
    std::fs::write(&cfg, r#"{"vehicle": {"masss_kg": 1605.0}}"#).unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "equilibrium", "--speed", "15"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("masss_kg"),
        "stderr should name the unknown key: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    // Out-of-domain argument: runtime failure.
    let out = run(&["equilibrium", "--speed=-5"]);
    assert_eq!(out.status.code(), Some(2));

    // A speed beyond the capable range makes rcrit-at-speed style queries
    // fail loudly rather than silently.
    let out = run(&["locus", "--speed", "0"]);
    assert_eq!(out.status.code(), Some(2));
}
