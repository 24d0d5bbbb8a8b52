//! End-to-end checks of the `specgeo` binary and the in-process runner.

use std::path::PathBuf;
use std::process::{Command, Output};

fn specgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specgeo"))
        .args(args)
        .env_remove(specgeo::cli::THREADS_VAR)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("specgeo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const TRIANGLE: [&str; 10] = [
    "coeffs",
    "polygon",
    "--kappa",
    "-1",
    "--area",
    "13/60pi",
    "--perimeter",
    "3",
    "--angles",
    "1/3pi,1/4pi,1/5pi",
];

#[test]
fn help_and_version_succeed() {
    assert_eq!(specgeo(&["--help"]).status.code(), Some(0));
    let v = specgeo(&["--version"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).starts_with("specgeo "));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(
        specgeo(&["coeffs", "sphere", "--bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(
        specgeo(&["coeffs", "lune", "--k", "0"]).status.code(),
        Some(2)
    );
    // angles violating Gauss-Bonnet
    let bad = specgeo(&[
        "coeffs",
        "polygon",
        "--kappa",
        "0",
        "--area",
        "1",
        "--angles",
        "1/2pi,1/2pi,1/2pi",
    ]);
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(
        specgeo(&["invert", "polygon", "--series", "/nonexistent/series.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn thread_variable_is_validated() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_specgeo"))
            .args(["coeffs", "sphere", "--order", "2"])
            .env(specgeo::cli::THREADS_VAR, v)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run("0"), Some(2));
    assert_eq!(run("many"), Some(2));
    assert_eq!(run("1"), Some(0));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args: Vec<&str> = TRIANGLE
        .iter()
        .copied()
        .chain(["--order", "12", "--format", "csv"])
        .collect();
    let a = specgeo(&args);
    let b = specgeo(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let e1 = specgeo(&["trace", "eval", "--spectrum", "lune", "--k", "3"]);
    let e2 = specgeo(&["trace", "eval", "--spectrum", "lune", "--k", "3"]);
    assert_eq!(e1.stdout, e2.stdout);
}

#[test]
fn config_is_echoed_to_stderr() {
    let o = specgeo(&["coeffs", "sphere", "--order", "2"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.lines().any(|l| l.starts_with("config: {")), "{err}");
}

#[test]
fn trig_verification_passes_and_failures_exit_three() {
    let ok = specgeo(&["verify", "trig"]);
    assert_eq!(ok.status.code(), Some(0));
    let table = stdout(&ok);
    assert!(table.lines().skip(1).all(|l| l.ends_with(",true")));
    let strict = specgeo(&[
        "verify",
        "trig",
        "--k",
        "2..5",
        "--eta",
        "0..3",
        "--tol",
        "0",
        "--closed-k",
        "2..3",
    ]);
    assert_eq!(strict.status.code(), Some(3));
}

#[test]
fn polygon_coefficients_invert_to_the_polygon() {
    let path = scratch("triangle.json");
    let args: Vec<&str> = TRIANGLE.iter().copied().chain(["--order", "84"]).collect();
    let o = specgeo(&args);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&path, &o.stdout).unwrap();
    let inv = specgeo(&["invert", "polygon", "--series", path.to_str().unwrap()]);
    assert_eq!(
        inv.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&inv.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&inv.stdout).unwrap();
    let dens: Vec<u64> = v["angles"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| {
            assert_eq!(a["angle"]["pi_num"], serde_json::json!(1));
            assert_eq!(a["multiplicity"], serde_json::json!(1));
            a["angle"]["pi_den"].as_u64().unwrap()
        })
        .collect();
    assert_eq!(dens, vec![5, 4, 3]);
    assert_eq!(
        v["area"],
        serde_json::json!({"num": "13", "den": "60", "pi_half_exp": 2})
    );
    assert_eq!(v["euler_char"], serde_json::json!(1));
}

#[test]
fn cone_sphere_inverts_with_supplied_curvature() {
    let path = scratch("cones.json");
    let o = specgeo(&[
        "coeffs", "orbifold", "--kappa", "1", "--area", "4/3pi", "--cones", "3,3", "--order", "60",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    std::fs::write(&path, &o.stdout).unwrap();
    let inv = specgeo(&[
        "invert",
        "orbifold",
        "--series",
        path.to_str().unwrap(),
        "--kappa",
        "1",
    ]);
    assert_eq!(
        inv.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&inv.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&inv.stdout).unwrap();
    assert_eq!(v["orders"], serde_json::json!([3, 3, 3, 3]), "{v}");
}

#[test]
fn evaluated_trace_refits_to_sphere_coefficients() {
    let path = scratch("sphere_trace.csv");
    let o = specgeo(&["trace", "eval", "--spectrum", "sphere", "--points", "15"]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&path, &o.stdout).unwrap();
    let fit = specgeo(&[
        "trace",
        "fit",
        "--spectrum",
        "sphere",
        "--input",
        path.to_str().unwrap(),
        "--exponents",
        "-2,0,2,4",
    ]);
    assert_eq!(
        fit.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&fit.stderr)
    );
    let mut rdr = csv::Reader::from_reader(fit.stdout.as_slice());
    let headers = rdr.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let (ni, fi) = (col("n"), col("fitted"));
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let n: i32 = rec[ni].parse().unwrap();
        let fitted: f64 = rec[fi].parse().unwrap();
        match n {
            -2 => assert!((fitted - 1.0).abs() < 1e-3),
            0 => assert!((fitted - 1.0 / 3.0).abs() < 1e-3),
            _ => {}
        }
    }
}

#[test]
fn in_process_runner_reports_codes() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = specgeo::cli::run(
        ["specgeo", "coeffs", "lune", "--k", "2", "--order", "3"],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["min_n"], serde_json::json!(-2));
    let code = specgeo::cli::run(
        [
            "specgeo", "invert", "polygon", "--series", "x", "--format", "csv",
        ],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 2);
}
