//! wasm-bindgen entry points for the static page in `www/`.

use wasm_bindgen::prelude::*;

pub mod ops;

fn to_js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// `{"M": [[..]], "v": [..], "w": [..]}` to `{"T_equal", "K_equal"}`.
#[wasm_bindgen(js_name = orbitEq)]
pub fn orbit_eq(input: &str) -> Result<String, JsValue> {
    to_js(ops::orbit_eq(input))
}

#[wasm_bindgen(js_name = sldpDistance)]
pub fn sldp_distance(input: &str, backend: &str) -> Result<String, JsValue> {
    to_js(ops::sldp_distance(input, backend))
}

#[wasm_bindgen]
pub fn lift(input: &str) -> Result<String, JsValue> {
    to_js(ops::lift(input))
}
