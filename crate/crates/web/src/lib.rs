//! Browser bindings. Every export takes plain numbers or a weight-system JSON
//! string and returns a JSON string; errors come back as JS exceptions.

use fockshift::eigen::{ellipse_predicate, region_sample, GridSpec};
use fockshift::spectra::left_growth_certificate;
use fockshift::weights::commutant_sup;
use fockshift::weights::schema::weights_from_json;
use fockshift::{Complex64, WeightSystem};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Region grids are capped so one click cannot freeze the tab.
const MAX_GRID_POINTS: usize = 10_000;
const MAX_DEPTH: usize = 14;

fn weights(doc: &str) -> Result<WeightSystem, String> {
    let v: Value = serde_json::from_str(doc).map_err(|e| format!("weights: {e}"))?;
    let ws = weights_from_json(&v, "$").map_err(|e| e.to_string())?;
    if ws.n() != 2 {
        return Err("the demo draws two-letter systems only".into());
    }
    Ok(ws)
}

fn check_depth(depth: usize) -> Result<(), String> {
    if depth == 0 || depth > MAX_DEPTH {
        return Err(format!("depth must lie in 1..={MAX_DEPTH}"));
    }
    Ok(())
}

/// Samples `(r1, r2)` on `[lo, hi]²` and returns
/// `{"points": [[r1, r2, verdict, tail_ratio], …], "ellipse": [c1, c2] | null}`.
pub fn region_grid_json(doc: &str, lo: f64, hi: f64, step: f64, depth: usize, eps: f64) -> Result<String, String> {
    check_depth(depth)?;
    let ws = weights(doc)?;
    let grid = GridSpec::new(lo, hi, step).map_err(|e| e.to_string())?;
    let per_axis = grid.points().len();
    if per_axis * per_axis > MAX_GRID_POINTS {
        return Err(format!("{} grid points; at most {MAX_GRID_POINTS}", per_axis * per_axis));
    }
    let rows = region_sample(&ws, &grid, depth, eps).map_err(|e| e.to_string())?;
    let points: Vec<Value> = rows
        .iter()
        .map(|r| json!([r.moduli[0], r.moduli[1], r.verdict.as_str(), r.tail_ratio]))
        .collect();
    let ellipse = ellipse_predicate(&ws, &[0.0, 0.0], depth).ok().map(|e| e.c);
    Ok(json!({ "points": points, "ellipse": ellipse }).to_string())
}

/// Largest commutant weight ratio on words of length `<= d` for `d = 1..=max_depth`.
pub fn commutant_profile_json(doc: &str, max_depth: usize) -> Result<String, String> {
    check_depth(max_depth)?;
    let ws = weights(doc)?;
    let mut rows = Vec::with_capacity(max_depth);
    let mut last = None;
    for d in 1..=max_depth {
        let r = commutant_sup(&ws, d).map_err(|e| e.to_string())?;
        rows.push(json!([d, r.value]));
        last = Some(r);
    }
    let r = last.expect("max_depth >= 1");
    Ok(json!({
        "profile": rows,
        "verdict": r.verdict.as_str(),
        "exact_sup": r.exact_sup,
        "witness": [r.witness.0, r.witness.1.format(2)],
    })
    .to_string())
}

/// Lower bounds on `‖A_j ξ_{w_k}‖` for a left inverse `A` at `λ = (λ1, λ2)`.
pub fn growth_table_json(re1: f64, im1: f64, re2: f64, im2: f64, m: f64, k_max: usize) -> Result<String, String> {
    if k_max == 0 || k_max > 10_000 {
        return Err("k must lie in 1..=10000".into());
    }
    let lambda = [Complex64::new(re1, im1), Complex64::new(re2, im2)];
    let t = left_growth_certificate(&lambda, k_max, m).map_err(|e| e.to_string())?;
    let rows: Vec<Value> = t.rows.iter().map(|r| json!([r.k, r.bound])).collect();
    Ok(json!({
        "case": t.case.as_str(),
        "letter": t.letter,
        "component": t.component,
        "rows": rows,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn region_grid(doc: &str, lo: f64, hi: f64, step: f64, depth: usize, eps: f64) -> Result<String, JsError> {
    region_grid_json(doc, lo, hi, step, depth, eps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn commutant_profile(doc: &str, max_depth: usize) -> Result<String, JsError> {
    commutant_profile_json(doc, max_depth).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn growth_table(re1: f64, im1: f64, re2: f64, im2: f64, m: f64, k_max: usize) -> Result<String, JsError> {
    growth_table_json(re1, im1, re2, im2, m, k_max).map_err(|e| JsError::new(&e))
}
