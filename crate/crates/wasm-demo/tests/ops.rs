use robust_orbits_wasm_demo::ops;
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn orbit_eq_reports_both_groups() {
    let out = parse(&ops::orbit_eq(r#"{"M": [[1, -1]], "v": ["1", "1"], "w": ["2", "1/2"]}"#).unwrap());
    assert_eq!(out["T_equal"], true);
    assert_eq!(out["K_equal"], false);
}

#[test]
fn sldp_point_subspace() {
    let out = parse(&ops::sldp_distance(r#"{"t": ["2/5", "3/5"], "U": []}"#, "exact").unwrap());
    assert_eq!(out["squared_exact"], "8/25");
}

#[test]
fn sldp_guard_is_tighter_than_the_cli() {
    let err = ops::sldp_distance(r#"{"t": ["1/3","1/3","1/3","1/3","1/3","1/3","1/3"], "U": []}"#, "exact").unwrap_err();
    assert!(err.contains("guard") || err.contains("dimension"), "{err}");
    assert!(ops::sldp_distance(r#"{"t": ["1/3","1/3","1/3","1/3","1/3","1/3","1/3"], "U": []}"#, "lll").is_ok());
}

#[test]
fn lift_of_the_unit_lattice() {
    let out = parse(&ops::lift(r#"{"G": [["1"]]}"#).unwrap());
    assert_eq!(out["n"], 4);
    assert_eq!(out["s_total"], "2");
}

#[test]
fn bad_input_is_an_error_not_a_panic() {
    assert!(ops::orbit_eq("{").unwrap_err().starts_with("malformed input"));
    assert!(ops::lift(r#"{"G": [["0"]]}"#).is_err());
    assert!(ops::sldp_distance(r#"{"t": ["1"], "U": []}"#, "fastest").is_err());
}
