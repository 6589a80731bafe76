//! The demo operations on JSON text, independent of the JS bindings so they can
//! be exercised natively.

use robust_orbits::exactlinalg::{GaussianRational, IntMatrix};
use robust_orbits::lattices::{sldp, with_max_enum_dim, Backend, SldpInstance};
use robust_orbits::lifting::lift_lattice;
use robust_orbits::torus::{orbit_equal_k, orbit_equal_t, TorusAction};
use serde::Deserialize;
use serde_json::{json, Value};

/// Rank limit for exact enumeration in the browser, where a long run freezes the page.
pub const MAX_ENUM_DIM: usize = 6;

#[derive(Deserialize)]
struct OrbitEqInput {
    #[serde(rename = "M")]
    m: IntMatrix,
    v: Vec<GaussianRational>,
    w: Vec<GaussianRational>,
}

#[derive(Deserialize)]
struct LiftInput {
    #[serde(rename = "G")]
    g: IntMatrix,
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, String> {
    serde_json::from_str(text).map_err(|e| format!("malformed input: {e}"))
}

fn render(v: Value) -> String {
    serde_json::to_string_pretty(&v).expect("values serialize")
}

pub fn orbit_eq(input: &str) -> Result<String, String> {
    let OrbitEqInput { m, v, w } = parse(input)?;
    let action = TorusAction::new(m).map_err(|e| e.to_string())?;
    let t = orbit_equal_t(&action, &v, &w).map_err(|e| e.to_string())?;
    let k = orbit_equal_k(&action, &v, &w).map_err(|e| e.to_string())?;
    Ok(render(json!({ "T_equal": t, "K_equal": k })))
}

pub fn sldp_distance(input: &str, backend: &str) -> Result<String, String> {
    let inst: SldpInstance = parse(input)?;
    let backend: Backend = backend.parse().map_err(|e: robust_orbits::Error| e.to_string())?;
    let (estimate, witness) =
        with_max_enum_dim(MAX_ENUM_DIM, || sldp(&inst, backend, MAX_ENUM_DIM)).map_err(|e| e.to_string())?;
    let mut out = serde_json::to_value(estimate).expect("serializes");
    out["witness"] = serde_json::to_value(witness).expect("serializes");
    Ok(render(out))
}

pub fn lift(input: &str) -> Result<String, String> {
    let LiftInput { g } = parse(input)?;
    let r = lift_lattice(&g).map_err(|e| e.to_string())?;
    Ok(render(serde_json::to_value(r).expect("serializes")))
}
