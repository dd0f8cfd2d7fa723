use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn hnkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hnkit"))
        .args(args)
        .env("HNKIT_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn lebesgue_measure_verifies() {
    let out = hnkit(&["verify-measure", "--in", &data("lebesgue2.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["verdict"], "pass");
}

#[test]
fn density_fails_with_moment_residual() {
    let out = hnkit(&["verify-measure", "--in", &data("density2.json")]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let moment = v["report"]["reports"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["form"] == "moment_c")
        .unwrap();
    let w = moment["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .find(|w| w["m"] == serde_json::json!([1, -1]) || w["m"] == serde_json::json!([-1, 1]))
        .unwrap();
    let r = w["residual"].as_f64().unwrap();
    assert!(
        (r - std::f64::consts::PI.powi(2) / 16.0).abs() < 1e-6,
        "{r}"
    );
}

#[test]
fn three_variable_example_at_i() {
    let out = hnkit(&[
        "evaluate",
        "--data",
        &data("three_var.json"),
        "--at",
        "[i,i,i]",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json(&out)["results"][0]["value"];
    assert!((v[0].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!((v[1].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-8);
}

#[test]
fn catalog_dump_round_trip_is_bit_stable() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("entry.json");
    let f = file.to_str().unwrap();
    let dump = hnkit(&[
        "catalog",
        "--dump",
        "--entry",
        "two_var_shifted",
        "--out",
        f,
    ]);
    assert_eq!(dump.status.code(), Some(0));
    let pts = ["[1+i, -2-0.5i]", "[0.3+2i, 0.1+0.4i]"];
    let from_file = hnkit(&["evaluate", "--data", f, "--at", pts[0], "--at", pts[1]]);
    let from_entry = hnkit(&[
        "evaluate",
        "--entry",
        "two_var_shifted",
        "--at",
        pts[0],
        "--at",
        pts[1],
    ]);
    let (a, b) = (json(&from_file), json(&from_entry));
    for k in 0..2 {
        assert_eq!(a["results"][k]["value"], b["results"][k]["value"]);
    }
}

#[test]
fn full_dump_is_an_array_of_entries() {
    let out = hnkit(&["catalog", "--dump"]);
    let v = json(&out);
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"three_var_inverse"));
    assert!(v[0]["data"]["mu"]["type"].is_string());
}

#[test]
fn csv_grid_has_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.json");
    std::fs::write(
        &pts,
        r#"[[[0, 1], [1, 2]], "[2-i, -1+0.5i]", [[0.5, -3], [0, -1]]]"#,
    )
    .unwrap();
    let out = hnkit(&[
        "evaluate",
        "--entry",
        "const_i_2",
        "--in",
        pts.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(&out.stdout[..]);
    assert_eq!(rdr.headers().unwrap().len(), 6);
    let im_q: Vec<f64> = rdr
        .records()
        .map(|r| r.unwrap()[5].parse().unwrap())
        .collect();
    assert_eq!(im_q.len(), 3);
    assert!((im_q[0] - 1.0).abs() < 1e-6);
    assert!((im_q[1] + 1.0).abs() < 1e-6);
    assert!((im_q[2] + 1.0).abs() < 1e-6);
}

#[test]
fn input_errors_exit_2_with_json_report() {
    let out = hnkit(&["evaluate", "--entry", "const_i_2", "--at", "[i, 3]"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "domain");
    let out = hnkit(&["evaluate", "--entry", "nope", "--at", "[i]"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hnkit(&["evaluate", "--entry", "const_i_2", "--at", "[i]"]);
    assert_eq!(json(&out)["error"]["kind"], "dimension_mismatch");
    let out = hnkit(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn panel_budget_exhaustion_exits_3() {
    let out = hnkit(&[
        "evaluate",
        "--entry",
        "three_var_inverse",
        "--at",
        "[i,i,i]",
        "--max-panels",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["results"][0]["converged"], false);
}

#[test]
fn recover_reciprocal_point_mass() {
    let out = hnkit(&["recover", "--entry", "one_var_reciprocal", "--t0", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let mass = v["limits"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["quantity"] == "point_mass")
        .unwrap();
    assert!((mass["value"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-3);
}

#[test]
fn symmetry_flags_dependence_for_density() {
    let ok = hnkit(&[
        "symmetry",
        "--entry",
        "two_var_shifted",
        "--at",
        "[1+i, -2-0.5i]",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = hnkit(&[
        "symmetry",
        "--entry",
        "nonadmissible_density",
        "--at",
        "[0.3+1.2i, -0.7-0.5i]",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let s = json(&bad)["results"][0]["independence"]["max_sensitivity"]
        .as_f64()
        .unwrap();
    assert!(s > 1e-2);
}

#[test]
fn selftest_runs_a_single_criterion() {
    let out = hnkit(&["selftest", "--criterion", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS criterion 3"));
}
