//! WebAssembly bindings for the demo page in `www/`. Each export takes and
//! returns JSON strings; the `*_json` functions do the work and are plain Rust
//! so they can be tested natively.

use num_traits::ToPrimitive;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use goodsets::components::{full_components, geodesic};
use goodsets::family::{self, gen_family};
use goodsets::io;
use goodsets::linalg::{self, format_rational};
use goodsets::{analyze_goodness, find_boundary, is_full, DEFAULT_ENUMERATION_CAP};

/// Largest `n` the page will build matrices for; inversion cost grows fast.
pub const MAX_FAMILY_N: u32 = 30;

/// Goodness, fullness, boundary, certificate and (for good sets) components
/// of a point-set document. When `from` and `to` are both non-negative the
/// geodesic between those points is added.
pub fn analyze_points_json(doc: &str, from: i32, to: i32) -> Result<Value, String> {
    let set = io::parse_point_set(doc).map_err(|e| e.to_string())?;
    let report = analyze_goodness(&set);
    let boundary = if report.is_good { find_boundary(&set).ok() } else { None };
    let mut out = io::goodness_json(&report, boundary.as_ref(), is_full(&set).ok());
    if report.is_good && !set.is_empty() {
        out["components"] = match full_components(&set, DEFAULT_ENUMERATION_CAP) {
            Ok(p) => io::partition_json(&p)["blocks"].clone(),
            Err(e) => json!({ "error": e.to_string() }),
        };
    }
    if from >= 0 && to >= 0 {
        let (from, to) = (from as usize, to as usize);
        if from >= set.len() || to >= set.len() {
            return Err(format!("point index out of range for {} points", set.len()));
        }
        out["geodesic"] = match geodesic(&set, set.point(from), set.point(to), DEFAULT_ENUMERATION_CAP) {
            Ok(g) => io::geodesic_json(&g),
            Err(e) => json!({ "error": e.to_string() }),
        };
    }
    Ok(out)
}

/// `M_n` or its inverse with row and column labels.
pub fn family_matrix_json(n: u32, inverse: bool) -> Result<Value, String> {
    if n == 0 || n > MAX_FAMILY_N {
        return Err(format!("n must be between 1 and {MAX_FAMILY_N}"));
    }
    let inst = gen_family(n as i64).map_err(|e| e.to_string())?;
    let reduced = family::reduced_matrix(&inst).map_err(|e| e.to_string())?;
    let points: Vec<String> = (2..=5 * n + 3).map(|i| format!("a{i}")).chain([format!("b{n}")]).collect();
    let coords: Vec<String> = reduced.col_coords.iter().map(|c| c.symbol().to_owned()).collect();
    let (matrix, rows, cols) = if inverse {
        let inv = linalg::invert(&reduced.matrix).map_err(|e| e.to_string())?;
        (inv, coords, points)
    } else {
        (reduced.matrix, points, coords)
    };
    let sums: Vec<String> = linalg::abs_row_sums(&matrix).iter().map(format_rational).collect();
    Ok(json!({
        "n": n,
        "rows": rows,
        "cols": cols,
        "entries": io::matrix_json(&matrix),
        "absRowSums": sums,
    }))
}

/// Per-block maximum absolute row sums of `M_n⁻¹` for `n <= n_max`, with the
/// fitted bound `C1 + C2 (1 - 2^-m)`.
pub fn row_sum_fit_json(n_max: u32) -> Result<Value, String> {
    if !(2..=MAX_FAMILY_N).contains(&n_max) {
        return Err(format!("nMax must be between 2 and {MAX_FAMILY_N}"));
    }
    let fit = family::row_sum_bound_report(n_max as usize).map_err(|e| e.to_string())?;
    let to_f64 = |q: &linalg::Rational| q.to_f64().unwrap_or(f64::NAN);
    let bound: Vec<f64> = (1..=n_max as usize).map(|m| to_f64(&fit.bound(m))).collect();
    Ok(json!({
        "nMax": n_max,
        "c1": format_rational(&fit.c1),
        "c2": format_rational(&fit.c2),
        "c1Approx": to_f64(&fit.c1),
        "c2Approx": to_f64(&fit.c2),
        "stable": fit.stable,
        "bound": bound,
        "blockSums": fit.block_sums.iter().map(|row| row.iter().map(to_f64).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "blockSumsExact": fit.block_sums.iter().map(|row| row.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
    }))
}

fn respond(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn analyze_points(doc: &str, from: i32, to: i32) -> Result<String, JsValue> {
    respond(analyze_points_json(doc, from, to))
}

#[wasm_bindgen]
pub fn family_matrix(n: u32, inverse: bool) -> Result<String, JsValue> {
    respond(family_matrix_json(n, inverse))
}

#[wasm_bindgen]
pub fn row_sum_fit(n_max: u32) -> Result<String, JsValue> {
    respond(row_sum_fit_json(n_max))
}
