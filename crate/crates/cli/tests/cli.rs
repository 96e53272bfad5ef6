use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn trm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trm")).args(args).env_remove("TRM_SEED").output().expect("spawn trm")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
}

fn space_file(name: &str, basis: &[&str]) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let desc = serde_json::json!({ "grid": { "nx": 64, "ny": 64 }, "basis": basis });
    std::fs::write(&path, desc.to_string()).unwrap();
    path
}

#[test]
fn dist_examples() {
    let v = json_of(&trm(&["dist", "--from", "i", "--to", "2i", "--t", "1"]));
    assert_eq!(v["schema"], 1);
    assert!((num(&v, "delta_t") - 2f64.ln()).abs() < 1e-15);
    assert!((num(&v, "d_teich") - 0.5 * 2f64.ln()).abs() < 1e-15);

    let v = json_of(&trm(&["dist", "--from", "2i", "--to", "i", "--t", "1"]));
    assert_eq!(num(&v, "delta_t"), 0.0);

    let v = json_of(&trm(&["dist", "--from", "i", "--to", "i", "--t", "0.5", "--foliation", "1,1"]));
    for key in ["d_teich", "delta_t", "delta_omega"] {
        assert_eq!(num(&v, key), 0.0);
    }
}

#[test]
fn dist_foliation_horizontal_matches_delta_t() {
    let v = json_of(&trm(&["dist", "--from", "-0.3+0.7i", "--to", "1.2+2i", "--t", "0.5", "--foliation", "1,0"]));
    assert!((num(&v, "delta_omega") - num(&v, "delta_t")).abs() < 1e-12);
}

#[test]
fn dist_errors_have_exit_codes() {
    let malformed = trm(&["dist", "--from", "1+", "--to", "i"]);
    assert_eq!(malformed.status.code(), Some(2));
    let below = trm(&["dist", "--from", "1-2i", "--to", "i"]);
    assert_eq!(below.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&below.stderr).contains("upper half-plane"));
    let zero = trm(&["dist", "--from", "i", "--to", "2i", "--foliation", "0,0"]);
    assert_eq!(zero.status.code(), Some(3));
    let weight = trm(&["dist", "--from", "i", "--to", "2i", "--t", "1.5"]);
    assert_eq!(weight.status.code(), Some(3));
}

#[test]
fn geodesic_csv() {
    let out = trm(&["geodesic", "--from", "i", "--to", "3+2i", "--samples", "9"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,re,im,norm"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 9);
    assert_eq!(&rows[0][1..3], &[0.0, 1.0]);
    assert!((rows[8][1] - 3.0).abs() < 1e-12 && (rows[8][2] - 2.0).abs() < 1e-12);
    assert!(rows.iter().all(|r| (r[3] - 1.0).abs() < 1e-12));
}

#[test]
fn ray_hand_cases() {
    let v = json_of(&trm(&["ray", "--base", "i", "--g", "0,1", "--f", "1,0", "--format", "json"]));
    assert_eq!(v["verdict"], "Bounded");
    assert!((num(&v, "limit_estimate") - 1.0).abs() < 1e-12);
    assert!((num(&v, "walsh_value") - 1.0).abs() < 1e-15);

    let v = json_of(&trm(&["ray", "--g", "1,0", "--f", "1,0", "--format", "json"]));
    assert_eq!(v["verdict"], "Divergent");

    let out = trm(&["ray", "--g", "1,0", "--f", "1,0", "--samples", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ray_csv_has_header_and_summary() {
    let out = trm(&["ray", "--g", "0,1", "--f", "1,0", "--t-max", "2", "--samples", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("t,delta_omega,decay,im"));
    assert_eq!(text.lines().count(), 6);
    assert!(String::from_utf8_lossy(&out.stderr).contains("verdict: Bounded"));
}

#[test]
fn isometry_check_passes() {
    let v = json_of(&trm(&["isometry-check", "--f", "1,1", "--t", "1", "--pairs", "1000"]));
    assert_eq!(v["passed"], true);
    assert!(num(&v, "max_deviation") <= 1e-9);
}

#[test]
fn cometric_examples() {
    let space = space_file("one_dim.json", &["1"]);
    let space = space.to_str().unwrap();
    let v = json_of(&trm(&["cometric", "--space", space, "--phi", "1", "--psi", "0.5"]));
    assert!((num(&v, "g_omega") - 2.0 / 3.0).abs() < 1e-10);
    assert!(num(&v, "boundary_residual") <= 1e-9);
    assert!(v.get("dual_estimate").is_none());

    let v = json_of(&trm(&["cometric", "--space", space, "--phi", "3-4i", "--psi", "0"]));
    assert!((num(&v, "g_omega") - 5.0).abs() < 1e-9);

    let v = json_of(&trm(&["cometric", "--space", space, "--phi", "1", "--psi", "0.5", "--check-dual", "--samples", "500"]));
    assert!(num(&v, "rel_err") <= 1e-5);

    let out = trm(&["cometric", "--space", space, "--phi", "1", "--psi", "1.2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cometric undefined"));

    let out = trm(&["cometric", "--space", space, "--phi", "1,1", "--psi", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cometric_two_dim_dual_agrees() {
    let space = space_file("two_dim.json", &["1", "poly(1,0.5)*phase(1,1)"]);
    let v = json_of(&trm(&[
        "cometric",
        "--space",
        space.to_str().unwrap(),
        "--phi",
        "0.8-0.3i,0.4+0.5i",
        "--psi",
        "0.2+0.1i,-0.1+0.2i",
        "--check-dual",
    ]));
    assert!(num(&v, "psi_norm") < 1.0);
    assert!(num(&v, "rel_err") <= 1e-5, "{v}");
}

#[test]
fn missing_space_file_is_usage_error() {
    let out = trm(&["cometric", "--space", "/nonexistent/space.json", "--phi", "1", "--psi", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_weakmetric_reports_sup_form() {
    let v = json_of(&trm(&["verify", "--suite", "weakmetric"]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], true);
    let checks = v["suites"][0]["checks"].as_array().unwrap();
    let sup = checks.iter().find(|c| c["name"] == "sup_form_vs_closed_form").expect("sup check");
    assert!(sup["max_violation"].as_f64().unwrap() <= 1e-7);
    assert!(checks.iter().all(|c| c["anchor"].as_str().is_some_and(|a| !a.is_empty())));
    let nonsep = checks.iter().find(|c| c["name"] == "non_separation").unwrap();
    assert!(nonsep["note"].as_str().unwrap().contains("y1 >= y2"));
}

#[test]
fn verify_unknown_suite_is_usage_error() {
    assert_eq!(trm(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_and_seeded() {
    let a = trm(&["verify", "--suite", "torus", "--seed", "5"]);
    let b = trm(&["verify", "--suite", "torus", "--seed", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let env = Command::new(env!("CARGO_BIN_EXE_trm"))
        .args(["verify", "--suite", "torus"])
        .env("TRM_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
    assert_eq!(json_of(&trm(&["verify", "--suite", "halfplane"]))["seed"], 0);
}

#[test]
fn output_flag_writes_file() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("dist.json");
    let out = trm(&["dist", "--from", "i", "--to", "2i", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
}

#[test]
fn tolerances_file_is_validated() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("bad_tol.json");
    std::fs::write(&path, r#"{"sup_grid": 0}"#).unwrap();
    let out = trm(&["--tolerances", path.to_str().unwrap(), "dist", "--from", "i", "--to", "2i"]);
    assert_ne!(out.status.code(), Some(0));
}
