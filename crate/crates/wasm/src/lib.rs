//! Browser bindings for the demo page: three interactive views over the
//! exact oracles. Each function takes the matrix text format, runs the
//! exhaustive searches under a caller-visible budget, and returns a JSON
//! string for the page to render. Everything is plain Rust behind thin
//! wasm-bindgen wrappers, so the same entry points are unit-tested on the
//! host target.

use num_rational::Ratio;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use rigx_core::budget::Budget;
use rigx_core::dims::{inner_dimension, outer_dimension, OuterDim};
use rigx_core::extract::find_rigid_submatrix;
use rigx_core::gfmat::FieldMatrix;
use rigx_core::report;
use rigx_core::rigidity::{global_rigidity_threshold, row_rigidity_threshold};

// the demo keeps budgets small: the page must stay responsive
const DEMO_BUDGET: Budget = Budget(20_000_000);

fn parse(text: &str) -> Result<FieldMatrix, String> {
    FieldMatrix::from_text(text).map_err(|e| e.to_string())
}

/// Echo a parsed matrix back as structured JSON (the grid editor's
/// validation path).
pub fn parse_matrix_json(text: &str) -> Result<String, String> {
    let m = parse(text)?;
    Ok(json!({
        "p": m.prime().value(),
        "m": m.nrows(),
        "n": m.ncols(),
        "rank": m.rank(),
        "entries": (0..m.nrows()).map(|i| m.row(i).to_vec()).collect::<Vec<_>>(),
        "text": m.to_text(),
    })
    .to_string())
}

/// Inner and outer dimension for every sparsity 1..=t_max, with witnesses
/// and the d + D >= 2 rank readout.
pub fn dimension_profile_json(text: &str, t_max: usize) -> Result<String, String> {
    let m = parse(text)?;
    let rank = m.rank();
    let mut rows: Vec<Value> = Vec::new();
    for t in 1..=t_max.max(1) {
        let inner = inner_dimension(&m, t, DEMO_BUDGET).map_err(|e| e.to_string())?;
        let outer = outer_dimension(&m, t, m.nrows(), DEMO_BUDGET).map_err(|e| e.to_string())?;
        let outer_value = match &outer {
            OuterDim::Found(w) => w.value,
            OuterDim::AboveMax { .. } => return Err("outer search exhausted below m".into()),
        };
        rows.push(json!({
            "t": t,
            "inner": inner.value,
            "outer": outer_value,
            "inner_witness": report::matrix_value(inner.witness.matrix()),
            "outer_witness": outer.found().map(|w| report::matrix_value(w.witness.matrix())),
            "sum": inner.value + outer_value,
            "twice_rank": 2 * rank,
        }));
    }
    Ok(json!({ "rank": rank, "profile": rows }).to_string())
}

/// Row and global rigidity thresholds for every rank parameter
/// 1..=r_max, with the refuting subspaces.
pub fn rigidity_profile_json(text: &str, r_max: usize) -> Result<String, String> {
    let m = parse(text)?;
    let mut rows: Vec<Value> = Vec::new();
    for r in 1..=r_max.max(1) {
        let row = row_rigidity_threshold(&m, r, DEMO_BUDGET).map_err(|e| e.to_string())?;
        let global = global_rigidity_threshold(&m, r, DEMO_BUDGET).map_err(|e| e.to_string())?;
        rows.push(json!({
            "r": r,
            "row_threshold": row.threshold,
            "global_threshold": global.threshold,
            "row_refuting": report::subspace_value(&row.refuting_l),
            "global_refuting": report::subspace_value(&global.refuting_l),
            "scanned": row.scanned.to_string(),
        }));
    }
    Ok(json!({ "rank": m.rank(), "profile": rows }).to_string())
}

/// One extraction run: either a certified rigid submatrix or the sparse
/// cover, with per-iteration detail.
pub fn extract_run_json(
    text: &str,
    eps_num: u64,
    eps_den: u64,
    k_iters: usize,
    t: usize,
) -> Result<String, String> {
    let m = parse(text)?;
    if eps_num == 0 || eps_den == 0 {
        return Err("eps must be a positive rational".into());
    }
    let eps = Ratio::new(eps_num, eps_den);
    let outcome = find_rigid_submatrix(&m, eps, k_iters, t, DEMO_BUDGET)
        .map_err(|e| e.to_string())?;
    Ok(report::extract_value(&outcome).to_string())
}

#[wasm_bindgen]
pub fn parse_matrix(text: &str) -> Result<String, JsValue> {
    parse_matrix_json(text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn dimension_profile(text: &str, t_max: usize) -> Result<String, JsValue> {
    dimension_profile_json(text, t_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn rigidity_profile(text: &str, r_max: usize) -> Result<String, JsValue> {
    rigidity_profile_json(text, r_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn extract_run(
    text: &str,
    eps_num: u64,
    eps_den: u64,
    k_iters: usize,
    t: usize,
) -> Result<String, JsValue> {
    extract_run_json(text, eps_num, eps_den, k_iters, t).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "gfmat 1 p=2 m=3 n=2\n1 0\n0 1\n1 1\n";

    #[test]
    fn parse_echo() {
        let v: serde_json::Value =
            serde_json::from_str(&parse_matrix_json(TRIANGLE).unwrap()).unwrap();
        assert_eq!(v["rank"], 2);
        assert_eq!(v["entries"][2][1], 1);
        assert!(parse_matrix_json("garbage").is_err());
    }

    #[test]
    fn dimension_profile_triangle() {
        let v: serde_json::Value =
            serde_json::from_str(&dimension_profile_json(TRIANGLE, 2).unwrap()).unwrap();
        assert_eq!(v["profile"][0]["inner"], 1);
        assert_eq!(v["profile"][0]["outer"], 3);
        assert_eq!(v["profile"][1]["inner"], 2);
        assert_eq!(v["profile"][1]["outer"], 2);
    }

    #[test]
    fn rigidity_profile_triangle() {
        let v: serde_json::Value =
            serde_json::from_str(&rigidity_profile_json(TRIANGLE, 2).unwrap()).unwrap();
        assert_eq!(v["profile"][1]["row_threshold"], 1);
        assert_eq!(v["profile"][1]["global_threshold"], 2);
    }

    #[test]
    fn extract_triangle_covers() {
        let v: serde_json::Value =
            serde_json::from_str(&extract_run_json(TRIANGLE, 1, 2, 1, 1).unwrap()).unwrap();
        assert_eq!(v["kind"], "cover");
        assert!(extract_run_json(TRIANGLE, 0, 2, 1, 1).is_err());
    }
}
