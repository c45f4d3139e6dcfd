//! End-to-end runs of the `dle` binary.

use std::process::{Command, Output};

use serde_json::Value;

const TOL: f64 = 1e-9;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn dle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn machine(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.push("--machine");
    let out = dle(&full);
    let doc: Value = serde_json::from_slice(&out.stdout).expect("stdout is one JSON document");
    (out.status.code().unwrap(), doc)
}

fn temp_file(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("dle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn numbers(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn matrix(v: &Value) -> Vec<Vec<f64>> {
    v.as_array().unwrap().iter().map(numbers).collect()
}

fn assert_close(got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= tol, "{got:?} vs {want:?}");
    }
}

#[test]
fn machine_output_has_stable_top_level_schema() {
    let runs: [&[&str]; 4] = [
        &["build", "--input", &fixture("example_6_1")],
        &["evolve", "--input", &fixture("example_6_1"), "--y0", "1,0,0,0,0,0"],
        &["analyze", "--input", &fixture("example_6_1")],
        &["check", "--input", &fixture("example_6_1"), "--iterations", "5"],
    ];
    for args in runs {
        let (code, doc) = machine(args);
        assert_eq!(code, 0);
        let keys: Vec<&String> = doc.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["command", "data", "status"]);
        assert_eq!(doc["command"], args[0]);
        assert_eq!(doc["status"], "ok");
    }
}

#[test]
fn build_example_6_2_reports_deficiency_and_constraint() {
    let (code, doc) = machine(&["build", "--input", &fixture("example_6_2")]);
    assert_eq!(code, 0);
    let step = &doc["data"]["steps"][0];
    assert_eq!(step["s"], 2);
    assert_eq!(step["rank"], 1);
    let want = [
        [-2., 1., 1., -4., 2., 2.],
        [1., -2., 1., 2., -4., 2.],
        [1., 1., -2., 2., 2., -4.],
    ];
    for (row, want) in matrix(&step["C"]).iter().zip(want) {
        let want: Vec<f64> = want.iter().map(|x| x * (-1.0 / 6.0)).collect();
        assert_close(row, &want, TOL);
    }
}

#[test]
fn build_example_6_4_has_rank_one() {
    let (code, doc) = machine(&["build", "--input", &fixture("example_6_4")]);
    assert_eq!(code, 0);
    let step = &doc["data"]["steps"][0];
    assert_eq!(step["rank"], 1);
    assert_eq!(step["s"], 1);
}

#[test]
fn single_slice_lattice_is_rejected() {
    let path = temp_file("one.json", r#"{"slices":[[1,2,3]],"spacelike":[],"timelike":[]}"#);
    let out = dle(&["build", "--input", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("need at least 2 slices"));
}

#[test]
fn schema_errors_name_the_key() {
    let path = temp_file("extra.json", r#"{"slices":[[1],[2]],"spacelike":[],"timelike":[],"loops":1}"#);
    let out = dle(&["build", "--input", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`loops`"));

    let path = temp_file("missing.json", r#"{"steps":[{"L":[[1]],"R":[[1]]}]}"#);
    let (code, doc) = machine(&["build", "--input", &path]);
    assert_eq!(code, 2);
    assert_eq!(doc["status"], "error");
    assert!(doc["data"]["message"].as_str().unwrap().contains("`Rbar`"));

    let out = dle(&["build", "--input", "/nonexistent/lattice.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn evolve_example_6_1_reaches_printed_state() {
    let (code, doc) = machine(&["evolve", "--input", &fixture("example_6_1"), "--y0", "1,0,0,0,0,0"]);
    assert_eq!(code, 0);
    let slice = &doc["data"]["slices"][1];
    let mut state = numbers(&slice["x"]);
    state.extend(numbers(&slice["p"]));
    let want: Vec<f64> = [3., -2., 3., 1.5, -3., 1.5].iter().map(|x| x / 4.0).collect();
    assert_close(&state, &want, TOL);
    assert!(slice["post_constraint_residual"].as_f64().unwrap() <= TOL);
    assert_eq!(slice["adapted"]["next"]["on_constraint"], true);
}

#[test]
fn evolve_example_6_2_rejects_off_surface_state() {
    let args = ["evolve", "--input", &fixture("example_6_2"), "--y0", "1,0,0,0,0,0"];
    let out = dle(&args);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("slice 0"));
    let (code, doc) = machine(&args);
    assert_eq!(code, 3);
    assert_eq!(doc["status"], "rejected");
    assert_eq!(doc["data"]["slice"], 0);
    // first column of C_0 is (1/3, -1/6, -1/6)
    assert_close(&numbers(&doc["data"]["offending"]), &[1. / 3., -1. / 6., -1. / 6.], TOL);
    assert!((doc["data"]["residual"].as_f64().unwrap() - 1. / 3.).abs() <= TOL);
}

#[test]
fn evolve_projects_on_request() {
    let (code, doc) = machine(&[
        "evolve",
        "--input",
        &fixture("example_6_2"),
        "--y0",
        "1,0,0,0,0,0",
        "--project",
    ]);
    assert_eq!(code, 0);
    assert!(doc["data"]["slices"][1]["post_constraint_residual"].as_f64().unwrap() <= TOL);
}

#[test]
fn zero_state_gives_zero_trajectory() {
    let (code, doc) = machine(&["evolve", "--input", &fixture("narrowing"), "--y0", "0,0,0,0,0,0"]);
    assert_eq!(code, 0);
    for slice in doc["data"]["slices"].as_array().unwrap() {
        assert!(numbers(&slice["x"]).iter().chain(&numbers(&slice["p"])).all(|v| *v == 0.0));
    }
}

#[test]
fn explicit_lambdas_are_used_and_checked() {
    let base = ["evolve", "--input", &fixture("example_6_2"), "--y0", "2,0,0,-1,0,0"];
    let (code, doc) = machine(&[&base[..], &["--lambda", "0.5,-0.25"]].concat());
    assert_eq!(code, 0);
    assert_close(&numbers(&doc["data"]["lambdas"][0]), &[0.5, -0.25], 0.0);
    let (_, zero) = machine(&base);
    assert_ne!(doc["data"]["slices"][1]["x"], zero["data"]["slices"][1]["x"]);

    let (code, _) = machine(&[&base[..], &["--lambda", "1"]].concat());
    assert_eq!(code, 2);
    let (code, _) = machine(&[&base[..], &["--lambda", "1,x"]].concat());
    assert_eq!(code, 2);
}

#[test]
fn companion_product_is_conserved() {
    let (code, doc) = machine(&[
        "evolve",
        "--input",
        &fixture("example_6_1"),
        "--y0",
        "1,0,-1,0.5,2,0",
        "--companion",
        "0,1,0,-1,0,3",
    ]);
    assert_eq!(code, 0);
    assert!(doc["data"]["companion_product_drift"].as_f64().unwrap() <= 1e-8);
    let products: Vec<f64> = doc["data"]["slices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["companion_product"].as_f64().unwrap())
        .collect();
    // omega(y, z) = x_y . p_z - x_z . p_y = (-1 - 3) - 2 at slice 0
    assert!((products[0] + 6.0).abs() <= TOL);
}

#[test]
fn analyze_reports_slice_dimensions() {
    let (_, doc) = machine(&["analyze", "--input", &fixture("example_6_2")]);
    assert_eq!(doc["data"]["slices"][0]["dim_D"], 4);

    let (_, doc) = machine(&["analyze", "--input", &fixture("example_6_1")]);
    assert_eq!(doc["data"]["slices"][0]["dim_D"], 6);
    assert_eq!(doc["data"]["slices"][0]["dim_N"], 0);

    let (_, doc) = machine(&["analyze", "--input", &fixture("narrowing")]);
    assert_eq!(doc["data"]["ddot_constant"], true);
    let dims: Vec<&Value> = doc["data"]["slices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| &s["dim_Ddot"])
        .collect();
    assert!(dims.iter().all(|d| *d == dims[0]));
}

#[test]
fn raw_matrices_match_lattice_input() {
    let (_, built) = machine(&["build", "--input", &fixture("example_6_1")]);
    let step = &built["data"]["steps"][0];
    let raw = serde_json::json!({"steps": [{"L": step["L"], "R": step["R"], "Rbar": step["Rbar"]}]});
    let path = temp_file("raw61.json", &raw.to_string());
    let args = |input: &str| {
        machine(&["evolve", "--input", input, "--y0", "1,0,0,0,0,0"]).1["data"]["slices"][1]["x"].clone()
    };
    assert_eq!(args(&path), args(&fixture("example_6_1")));
}

#[test]
fn check_passes_on_example_6_1() {
    let (code, doc) = machine(&["check", "--input", &fixture("example_6_1")]);
    assert_eq!(code, 0);
    let conservation = doc["data"]["invariants"]
        .as_array()
        .unwrap()
        .iter()
        .find(|inv| inv["name"] == "symplectic_conservation")
        .unwrap();
    assert_eq!(conservation["passed"], true);
    assert!(conservation["worst_residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn check_reports_asymmetric_input() {
    let path = temp_file(
        "asym.json",
        r#"{"steps":[{"L":[[1,2],[0,1]],"R":[[1,0],[0,1]],"Rbar":[[1,0],[0,1]]}]}"#,
    );
    let out = dle(&["check", "--input", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not symmetric"));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = ["check", "--seed", "5", "--iterations", "100", "--machine"];
    let first = dle(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, dle(&args).stdout);

    let args = ["evolve", "--input", &fixture("narrowing"), "--y0", "0,0,0,0,0,0", "--seed", "9", "--machine"];
    assert_eq!(dle(&args).stdout, dle(&args).stdout);
    let other = ["evolve", "--input", &fixture("narrowing"), "--y0", "0,0,0,0,0,0", "--seed", "10", "--machine"];
    assert_ne!(dle(&args).stdout, dle(&other).stdout);
}

#[test]
fn numbers_use_seventeen_significant_digits() {
    // the rejected state is echoed back unchanged, so its digits are exact
    let out = dle(&["evolve", "--input", &fixture("example_6_2"), "--y0", "0.1,0,0,0,0,0", "--machine"]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0.10000000000000001"), "{text}");
}

#[test]
fn human_output_is_plain_text() {
    let out = dle(&["analyze", "--input", &fixture("example_6_2")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("dle analyze: ok\n"));
    assert!(text.contains("solution_dim: "));
}
