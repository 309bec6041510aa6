//! Static-page demo. Build with `wasm-pack build --target web --out-dir www/pkg`
//! and serve `www/`.

use serde_json::json;
use sl3::counting::{count_matrices, counting_bound, final_bound_terms, optimize_amplifier_exponent, sup_norm_exponent, BasePoint, CountConfig, CountQuery};
use sl3::hecke::verify_linearizations;
use wasm_bindgen::prelude::*;

fn to_js<E: std::fmt::Display>(e: E) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn linearize_json(p: u32, q: u32) -> Result<String, String> {
    let r = verify_linearizations(p as u64, q as u64).map_err(|e| e.to_string())?;
    serde_json::to_string(&r).map_err(|e| e.to_string())
}

fn count_json(l: u32, n: u32, d1: f64, d2: f64) -> Result<String, String> {
    let q = CountQuery::new(l as u64, n as u64, [d1, d2], BasePoint::Identity).map_err(|e| e.to_string())?;
    let cfg = CountConfig { max_det: 1000, ..CountConfig::default() };
    let r = count_matrices(&q, &cfg).map_err(|e| e.to_string())?;
    let bound = counting_bound(&q, &cfg);
    Ok(json!({"count": r.count, "bound": bound, "constant": r.count as f64 / bound, "witnesses": r.witnesses}).to_string())
}

fn optimize_json() -> String {
    let (x, v) = optimize_amplifier_exponent(&final_bound_terms()).expect("terms have a positive slope");
    json!({"x": x.to_string(), "exponent": v.to_string(), "sup_norm_exponent": sup_norm_exponent(&v).to_string()}).to_string()
}

/// The six composition identities for `T_p`, `T_q` and their duals, as JSON.
#[wasm_bindgen]
pub fn hecke_linearize(p: u32, q: u32) -> Result<String, JsValue> {
    linearize_json(p, q).map_err(to_js)
}

/// Count of integer matrices near the orthogonal group at the identity, as JSON.
#[wasm_bindgen]
pub fn count_near_orthogonal(l: u32, n: u32, d1: f64, d2: f64) -> Result<String, JsValue> {
    count_json(l, n, d1, d2).map_err(to_js)
}

/// Optimal amplifier length exponent and the resulting sup-norm exponent, as JSON.
#[wasm_bindgen]
pub fn amplifier_exponent() -> String {
    optimize_json()
}
