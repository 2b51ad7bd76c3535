use serde_json::Value;
use std::process::{Command, Output};

fn bolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bolab"))
        .args(args)
        .env("BO_LAB_THREADS", "2")
        .output()
        .expect("spawn bolab")
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let out = bolab(args);
    let v = if out.stdout.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
    };
    (out.status.code().unwrap(), v)
}

#[test]
fn profile_partition_example() {
    let (code, v) = run_json(&[
        "profile", "partition", "--parts", "4,4,4,4,1,1,1", "--r2", "-1", "--r1", "1", "--center", "0", "--json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["minima"], serde_json::json!([4.0, -3.0, -7.0]));
    assert_eq!(v["maxima"], serde_json::json!([0.0, -6.0]));
    assert_eq!(v["band_multipliers"], serde_json::json!([4, 3]));
    assert_eq!(v["gap_multipliers"], serde_json::json!([3, 1]));
}

#[test]
fn profile_invert_and_check() {
    let (code, v) = run_json(&[
        "profile", "invert", "--minima", "4,-3,-7", "--maxima", "0,-6", "--r2", "-1", "--r1", "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["partition"], serde_json::json!([4, 4, 4, 4, 1, 1, 1]));
    // s = (−2,−1,1) is quantized in renormalized units at (ε̄, ℏ) = (1, 2) but not classically.
    let (code, _) = run_json(&["profile", "check", "--minima", "1,-2", "--maxima", "-1"]);
    assert_eq!(code, 0);
    let (code, v) = run_json(&["profile", "check", "--minima", "1,-2", "--maxima", "-1", "--classical"]);
    assert_eq!(code, 1);
    assert!(!v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn plot_data_csv() {
    let out = bolab(&["profile", "plot-data", "--parts", "2,1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("c,f\n"));
}

#[test]
fn theorem1_passes() {
    let (code, v) = run_json(&["verify", "theorem1", "--eps", "1", "--hbar", "2", "--a", "0", "--max-degree", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
    assert_eq!(v["negative_control"]["rejected"], true);
}

#[test]
fn part1_reports_non_integral_actions() {
    let (code, v) = run_json(&["verify", "part1", "--phase", "-1,0,2;0", "--hbar", "1", "--tol", "1e-4"]);
    assert_eq!(code, 0);
    assert_eq!(v["actions"][0]["nearest"], 1);
    let (code, _) = run_json(&["verify", "part1", "--phase", "-1,0,2;0", "--hbar", "0.4", "--tol", "1e-4"]);
    assert_eq!(code, 1);
}

#[test]
fn lax_spectrum_constant_field() {
    let (code, v) = run_json(&["lax", "spectrum", "--dim", "8", "--eps", "1", "--field", "const:1"]);
    assert_eq!(code, 0);
    let ev: Vec<f64> = v["eigenvalues"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(ev, vec![1.0, 0.0, -1.0, -2.0, -3.0, -4.0, -5.0, -6.0]);
}

#[test]
fn lax_hierarchy_of_one_phase_field() {
    let (code, v) = run_json(&["lax", "hierarchy", "--field", "phase:-1,0,2;0", "--l", "2,3"]);
    assert_eq!(code, 0);
    assert!((v["T"]["2"].as_f64().unwrap() - 3.0).abs() < 1e-8);
    assert!((v["T"]["3"].as_f64().unwrap() - 5.0).abs() < 1e-8);
    assert!((v["O3"].as_f64().unwrap() - 7.0).abs() < 1e-8);
}

#[test]
fn multiphase_commands() {
    let phase = "-6,-4.5,-3.5,-3,-1;0.3,1.1";
    let (code, v) = run_json(&["multiphase", "periodicity", "--phase", phase]);
    assert_eq!(code, 0);
    assert_eq!(v["N"], serde_json::json!([2, 1]));
    let (code, v) = run_json(&["multiphase", "residual", "--phase", phase, "--max", "1e-5"]);
    assert_eq!(code, 0, "{v}");
    let (code, _) = run_json(&["multiphase", "periodicity", "--phase", "-1,0,2.5;0"]);
    assert_eq!(code, 2);
}

#[test]
fn quantum_blocks_exact() {
    let (code, v) = run_json(&["quantum", "block", "--degree", "2", "--op", "T3", "--exact"]);
    assert_eq!(code, 0);
    assert_eq!(v["matrix"], serde_json::json!([["-8", "8"], ["4", "-4"]]));
    let (code, v) = run_json(&["quantum", "block", "--degree", "1", "--op", "grade", "--exact"]);
    assert_eq!(code, 0);
    assert_eq!(v["matrix"], serde_json::json!([["0", "1"], ["2", "-1"]]));
    let (code, _) = run_json(&["quantum", "block", "--degree", "1", "--op", "X9"]);
    assert_eq!(code, 2);
}

#[test]
fn quantum_diag_commute_and_identity() {
    let (code, v) = run_json(&["quantum", "diag", "--degree", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["states"][1]["partition"], serde_json::json!([1, 1]));
    assert!((v["states"][1]["O3"].as_f64().unwrap() + 36.0).abs() < 1e-9);
    let (code, v) = run_json(&["quantum", "commute", "--degree", "4", "--l1", "3", "--l2", "4", "--tol", "1e-10"]);
    assert_eq!(code, 0, "{v}");
    let (code, _) = run_json(&["quantum", "resolvent-identity", "--degree", "4"]);
    assert_eq!(code, 0);
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(bolab(&["profile", "partition", "--bogus"]).status.code(), Some(2));
    assert_eq!(bolab(&["lax", "spectrum", "--field", "nope"]).status.code(), Some(2));
    assert_eq!(bolab(&["verify", "theorem1", "--hbar", "-1"]).status.code(), Some(2));
}

#[test]
fn output_is_byte_identical_and_can_go_to_a_file() {
    let args = ["quantum", "diag", "--degree", "3", "--a", "0.5"];
    let a = bolab(&args).stdout;
    let b = bolab(&args).stdout;
    assert_eq!(a, b);
    let dir = std::env::temp_dir().join(format!("bolab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("diag.json");
    let mut with_file: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    with_file.extend(["--output", &p]);
    assert!(bolab(&with_file).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), a);
    std::fs::remove_dir_all(&dir).unwrap();
}
