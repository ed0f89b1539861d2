use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roughharm"))
        .args(args)
        .current_dir(dir)
        .env_remove("ROUGHHARM_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_in(&std::env::temp_dir(), args)
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

#[test]
fn dims_table() {
    let text = stdout(&run(&["dims", "--n", "3", "--k", "0..8"]));
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(text.lines().next(), Some("k,d_k,mu_k"));
    assert_eq!(rows.len(), 9);
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(row[0].parse::<usize>().unwrap(), k);
        assert_eq!(row[1].parse::<usize>().unwrap(), 2 * k + 1);
        assert_eq!(row[2].parse::<f64>().unwrap(), (k * (k + 1)) as f64);
    }
}

#[test]
fn hadamard_energy_json() {
    let v = json(&run(&["energy", "--variant", "hadamard", "--terms", "6", "--format", "json"]));
    let formula = v["formula"].as_f64().unwrap();
    assert!((formula - 6.0 * PI).abs() < 1e-12);
    assert!((v["quadrature"].as_f64().unwrap() - formula).abs() < 1e-9);
    assert_eq!(v["terms"], 6);
    assert_eq!(v["k_max"], 1024);
}

#[test]
fn sobolev_limit_estimate() {
    let v = json(&run(&[
        "sobolev", "--variant", "notHs", "--n", "2", "--seed", "7", "--sigma", "0", "--K", "2^20", "--format", "json",
    ]));
    let scan = &v["scans"][0];
    assert_eq!(scan["verdict"], "convergent");
    let zeta4 = PI.powi(4) / 90.0;
    assert!((scan["limit_estimate"].as_f64().unwrap() - zeta4).abs() < 1e-6);
    assert_eq!(scan["blocks"][0].as_object().unwrap().keys().collect::<Vec<_>>(), ["K", "S_K"]);
}

#[test]
fn sobolev_table_has_verdict_per_sigma() {
    let text = stdout(&run(&["sobolev", "--variant", "notCbeta", "--n", "3", "--sigma", "0.1,0.35", "--K", "2^20"]));
    let verdicts: Vec<(f64, String)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            (c[0].parse().unwrap(), c[3].to_string())
        })
        .collect();
    assert!(verdicts.iter().any(|(s, v)| *s == 0.1 && v == "convergent"));
    assert!(verdicts.iter().any(|(s, v)| *s == 0.35 && v == "divergent"));
}

#[test]
fn csv_reals_round_trip() {
    let text = stdout(&run(&["weierstrass", "--t", "0.3,-1.7", "--terms", "40"]));
    for line in text.lines().skip(1) {
        let value = line.split(',').nth(1).unwrap();
        assert!(value.contains('e') && value.contains('.') && !value.contains(' '));
        let mantissa = value.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.len(), 18, "17 significant digits in {value}");
    }
}

#[test]
fn runs_are_byte_identical() {
    let args = ["holder", "--samples", "3000", "--seed", "11", "--finest", "10", "--format", "json"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
    let args = ["neuheisel-sample", "--k", "16", "--seeds", "2"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["no-such-command"],
        vec!["dims", "--n", "3", "--bogus"],
        vec!["dims", "--n", "3", "--k", "5..2"],
        vec!["sobolev", "--variant", "notHs", "--n", "2", "--sigma", "0", "--K", "2^99"],
        vec!["eval", "--variant", "hadamard", "--n", "3", "--point", "0,0,0"],
        vec!["transmission-verify", "--variant", "holder", "--n", "3"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn unwritable_output_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let target = blocker.join("out.csv");
    let out = run(&["dims", "--n", "2", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_supplies_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# dims run\nn = 4\nk = 0..3\nformat = json\n").unwrap();
    let v = json(&run(&["--config", cfg.to_str().unwrap(), "dims"]));
    assert_eq!(v["n"], 4);
    assert_eq!(v["rows"][3]["d_k"], 16.0);
    // Command-line flags win over the file.
    let v = json(&run(&["--config", cfg.to_str().unwrap(), "dims", "--n", "2"]));
    assert_eq!(v["n"], 2);
    assert_eq!(v["rows"][3]["d_k"], 2.0);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_roughharm"))
        .args(["dims", "--n", "3", "--k", "2"])
        .env("ROUGHHARM_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(dir.path().join("dims.csv")).unwrap();
    assert_eq!(text.lines().nth(1), Some("2,5,6.0000000000000000e0"));
}

#[test]
fn transmission_verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = run_in(
        dir.path(),
        &["transmission-verify", "--variant", "tilde", "--n", "2", "--K", "1024", "--bumps", "5", "--directions", "64",
          "--format", "json", "--out", report.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["conditions"].as_array().unwrap().len(), 5);
    assert_eq!(v["bumps"].as_array().unwrap().len(), 5);
    assert!(v["witnesses"].as_array().unwrap().is_empty());
    assert!(!dir.path().join("report.witnesses.json").exists());
}

#[test]
fn transmission_failure_exits_two_with_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["transmission-verify", "--variant", "tilde", "--n", "2", "--K", "64", "--bumps", "2", "--directions", "32",
          "--rho", "1", "--format", "json"],
    );
    assert_eq!(out.status.code(), Some(2));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], false);
    assert!(!report["witnesses"].as_array().unwrap().is_empty());
    let file: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("transmission-verify.witnesses.json")).unwrap())
            .unwrap();
    let witnesses = file["witnesses"].as_array().unwrap();
    assert!(!witnesses.is_empty());
    assert_eq!(witnesses[0]["location"], serde_json::json!([1.0, 0.0]));
}

#[test]
fn spectrum_matches_exact_energies() {
    let text = stdout(&run(&["spectrum", "--variant", "notCbeta", "--n", "3", "--K", "32"]));
    for line in text.lines().skip(1) {
        let c: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((c[1] - c[2]).abs() < 1e-12, "degree {}", c[0]);
    }
}

#[test]
fn fourier_and_holder_tables() {
    let text = stdout(&run(&["fourier", "--N", "2^12", "--alpha", "0.5"]));
    for (j, line) in text.lines().skip(1).enumerate() {
        let c: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(c[0], 2f64.powi(j as i32));
        assert!((c[1] - 2f64.powf(-0.5 * j as f64)).abs() < 1e-6);
    }
    let v = json(&run(&["fourier", "--function", "hardy", "--terms", "1000", "--exact", "--format", "json"]));
    for cert in v["certificates"].as_array().unwrap() {
        assert_eq!(cert["verdict"], "growing");
    }
    let v = json(&run(&["holder", "--samples", "5000", "--finest", "12", "--format", "json"]));
    let slope = v["modulus"]["slope"].as_f64().unwrap();
    assert!((slope - 0.5).abs() < 0.05, "{slope}");
    assert!((v["bound_constant"].as_f64().unwrap() - 3.0 / (1.0 - 0.5f64.sqrt())).abs() < 1e-12);
}

#[test]
fn eval_interior_and_exterior() {
    let value = |args: &[&str]| -> f64 {
        let mut all = vec!["eval", "--variant", "anyn_holder", "--alpha", "0.5", "--n", "3", "--K", "2^12", "--format", "json"];
        all.extend_from_slice(args);
        json(&run(&all))["values"][0]["value"]["value"].as_f64().unwrap()
    };
    let y = [0.6, -0.4, 0.2];
    let r2: f64 = y.iter().map(|c| c * c).sum();
    let x: Vec<String> = y.iter().map(|c| format!("{:e}", c / r2)).collect();
    let inside = value(&["--point", "0.6,-0.4,0.2"]);
    let outside = value(&["--kelvin", "--point", &x.join(",")]);
    // Kelvin factor |x|^{2-n} = |y| in three dimensions.
    assert!((outside - inside * r2.sqrt()).abs() < 1e-12, "{outside} {inside}");
}
