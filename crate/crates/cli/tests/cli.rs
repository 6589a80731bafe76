use robust_orbits_cli::{run, Outcome};
use serde_json::Value;

fn call(args: &[&str]) -> Outcome {
    run(std::iter::once("robust-orbits").chain(args.iter().copied()))
}

fn ok_json(args: &[&str]) -> Value {
    let out = call(args);
    assert_eq!(out.code, 0, "{}", out.stdout);
    serde_json::from_str(&out.stdout).expect("stdout is JSON")
}

fn error_kind(out: &Outcome) -> String {
    let v: Value = serde_json::from_str(&out.stdout).expect("diagnostic is JSON");
    v["error"]["kind"].as_str().expect("kind").to_string()
}

#[test]
fn orbit_eq_flags() {
    let v = ok_json(&["orbit-eq", r#"{"M": [[1, -1]], "v": ["1", "1"], "w": ["2", "1/2"]}"#]);
    assert_eq!(v, serde_json::json!({"T_equal": true, "K_equal": false}));
}

#[test]
fn lift_unit_lattice() {
    let v = ok_json(&["lift", r#"{"G": [["1"]]}"#]);
    assert_eq!(v["n"], 4);
    assert_eq!(v["s_total"], "2");
}

#[test]
fn sldp_point_subspace() {
    let v = ok_json(&["sldp", r#"{"t": ["2/5", "3/5"], "U": []}"#]);
    assert_eq!(v["squared_exact"], "8/25");
}

#[test]
fn malformed_json_is_exit_2() {
    let out = call(&["orbit-eq", "{not json"]);
    assert_eq!(out.code, 2);
    assert_eq!(error_kind(&out), "malformed_input");
}

#[test]
fn missing_field_is_exit_2() {
    let out = call(&["lift", "{}"]);
    assert_eq!(out.code, 2);
    assert_eq!(error_kind(&out), "malformed_input");
}

#[test]
fn singular_lattice_is_a_contract_violation() {
    let out = call(&["lift", r#"{"G": [["1", "2"], ["2", "4"]]}"#]);
    assert_eq!(out.code, 2);
    assert_eq!(error_kind(&out), "contract_violation");
}

#[test]
fn guard_refusal_is_exit_3() {
    let input = r#"{"t": ["1/3", "1/5", "1/7"], "U": [["1", "1", "0"]]}"#;
    let out = call(&["--max-enum-dim", "1", "sldp", input]);
    assert_eq!(out.code, 3, "{}", out.stdout);
    assert_eq!(error_kind(&out), "dimension_guard");
}

#[test]
fn unknown_subcommand_is_usage() {
    let out = call(&["frobnicate"]);
    assert_eq!(out.code, 2);
    assert_eq!(error_kind(&out), "usage");
}

#[test]
fn output_is_deterministic() {
    let args = ["lift", r#"{"G": [["2", "1"], ["0", "3"]]}"#];
    assert_eq!(call(&args), call(&args));
}

#[test]
fn kempf_ness_small_hessian_alias() {
    let v = ok_json(&["kempf-ness", "example63", "--N", "8"]);
    assert_eq!(v["N"], 8);
    assert_eq!(v["all_hold"], true);
}

#[test]
fn verify_single_criterion() {
    let out = call(&["verify", "--only", "10"]);
    let v: Value = serde_json::from_str(&out.stdout).expect("JSON");
    assert_eq!(v.as_array().map(Vec::len), Some(1));
    assert_eq!(out.code, if v[0]["passed"] == true { 0 } else { 1 });
}
