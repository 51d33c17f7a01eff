//! Browser bindings: JSON strings in, JSON strings out.
//!
//! Every entry point takes a side matrix (`[["1","1","0"], ...]`, row `i`
//! holding the side lengths of box `A_i`) and returns a JSON document. The
//! `*_json` functions are plain Rust so they can be tested natively.

use mixvol_core::bodies::{AxisBox, Body};
use mixvol_core::inequalities::{gromov_concavity, gromov_triple_check, Verdict};
use mixvol_core::json::{parse_matrix, polynomial_to_json, ReportJson};
use mixvol_core::mixed::box_volume_polynomial;
use mixvol_core::numerics::Matrix;
use mixvol_core::rational::{to_decimal, Rational};
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn sides(text: &str) -> Result<Matrix, String> {
    let m = parse_matrix(text).map_err(|e| e.to_string())?;
    if m.rows() == 0 || m.cols() == 0 {
        return Err("empty side matrix".into());
    }
    Ok(m)
}

fn log_value(v: &Rational) -> Value {
    if v.is_zero() {
        Value::Null
    } else {
        // display only; verdicts never look at this
        json!(v.to_f64().map_or(f64::NAN, f64::ln))
    }
}

/// Coefficients `V_I` with a decimal and a natural-log approximation each.
pub fn volume_polynomial_json(side_matrix: &str) -> Result<String, String> {
    let m = sides(side_matrix)?;
    let vp = box_volume_polynomial(&m).map_err(|e| e.to_string())?;
    let terms: Vec<Value> = polynomial_to_json(&vp)
        .into_iter()
        .map(|t| {
            json!({
                "index": t.index,
                "value": t.value.to_string(),
                "approx": to_decimal(&t.value.0, 12),
                "log": log_value(&t.value.0),
            })
        })
        .collect();
    Ok(json!({ "k": vp.k(), "n": vp.n(), "coefficients": terms }).to_string())
}

/// `V(1,2,3)^3` against `V(1,1,2) V(2,2,3) V(3,3,1)` for a 3x3 side matrix.
pub fn triple_check_json(side_matrix: &str) -> Result<String, String> {
    let m = sides(side_matrix)?;
    if m.rows() != 3 || m.cols() != 3 {
        return Err("the triple inequality needs a 3x3 side matrix".into());
    }
    let bodies: Vec<Body> = (0..3)
        .map(|i| AxisBox::from_lengths(m.row(i)).map(Body::Box))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let report = gromov_triple_check(&bodies).map_err(|e| e.to_string())?;
    serde_json::to_string(&ReportJson::from(&report)).map_err(|e| e.to_string())
}

/// Concave-envelope test over the whole simplex; `failing_centers` lists
/// the points where it fails.
pub fn gromov_check_json(side_matrix: &str) -> Result<String, String> {
    let m = sides(side_matrix)?;
    let vp = box_volume_polynomial(&m).map_err(|e| e.to_string())?;
    let report = gromov_concavity(&vp);
    let mut v = serde_json::to_value(ReportJson::from(&report)).map_err(|e| e.to_string())?;
    let failing: Vec<&Vec<usize>> = report.certificates.iter().map(|c| &c.center.0).collect();
    v["failing_centers"] = json!(failing);
    v["fails"] = json!(report.verdict == Verdict::Fails);
    Ok(v.to_string())
}

#[wasm_bindgen(js_name = volumePolynomial)]
pub fn volume_polynomial(side_matrix: &str) -> Result<String, JsError> {
    volume_polynomial_json(side_matrix).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = tripleCheck)]
pub fn triple_check(side_matrix: &str) -> Result<String, JsError> {
    triple_check_json(side_matrix).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = gromovCheck)]
pub fn gromov_check(side_matrix: &str) -> Result<String, JsError> {
    gromov_check_json(side_matrix).map_err(|e| JsError::new(&e))
}
