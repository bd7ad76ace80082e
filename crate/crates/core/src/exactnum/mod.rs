//! Exact coefficient fields, truncated Laurent series with certified
//! valuations, and matrices over them.
//!
//! All values are immutable after construction; operations never mutate
//! shared state, so concurrent use on distinct values is safe.

mod kpoly;
mod matrix;
mod scalar;
mod series;

pub use kpoly::KPoly;
pub use matrix::SeriesMatrix;
pub use scalar::{all_field_elements, rational_sqrt, FieldId, FqElem, Scalar};
pub use series::{LaurentSeries, Valuation};

use crate::{Error, Result};
use serde_json::{json, Value};

/// Serializes a series as `{"horizon": N, "coeffs": [[e, "c"], ...]}`;
/// exact series carry `"horizon": null`.
pub fn series_to_json(s: &LaurentSeries) -> Value {
    let coeffs: Vec<Value> = s.iter().map(|(e, c)| json!([e, c.to_decimal()])).collect();
    json!({"horizon": s.horizon(), "coeffs": coeffs})
}

pub fn series_from_json(field: FieldId, v: &Value) -> Result<LaurentSeries> {
    let bad = |m: &str| Error::Validation(format!("bad series document: {m}"));
    let obj = v.as_object().ok_or_else(|| bad("expected object"))?;
    let horizon = match obj.get("horizon") {
        None | Some(Value::Null) => None,
        Some(h) => Some(h.as_i64().ok_or_else(|| bad("horizon must be an integer"))?),
    };
    let coeffs = obj.get("coeffs").and_then(Value::as_array).ok_or_else(|| bad("missing coeffs"))?;
    let mut pairs = Vec::new();
    for pair in coeffs {
        let arr = pair.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("coeff pair"))?;
        let e = arr[0].as_i64().ok_or_else(|| bad("exponent"))?;
        let c = match &arr[1] {
            Value::String(s) => Scalar::parse(field, s)?,
            Value::Number(n) => {
                Scalar::parse(field, &n.to_string())?
            }
            _ => return Err(bad("coefficient must be a string")),
        };
        pairs.push((e, c));
    }
    Ok(LaurentSeries::from_coeffs(field, pairs, horizon))
}

/// Serializes a matrix as `{"rows": r, "cols": c, "entries": [series...]}`
/// in row-major order.
pub fn matrix_to_json(m: &SeriesMatrix) -> Value {
    let entries: Vec<Value> = m.entries().iter().map(series_to_json).collect();
    json!({"rows": m.rows(), "cols": m.cols(), "entries": entries})
}

pub fn matrix_from_json(field: FieldId, v: &Value) -> Result<SeriesMatrix> {
    let bad = |m: &str| Error::Validation(format!("bad matrix document: {m}"));
    let obj = v.as_object().ok_or_else(|| bad("expected object"))?;
    let rows = obj.get("rows").and_then(Value::as_u64).ok_or_else(|| bad("rows"))? as usize;
    let cols = obj.get("cols").and_then(Value::as_u64).ok_or_else(|| bad("cols"))? as usize;
    let raw = obj.get("entries").and_then(Value::as_array).ok_or_else(|| bad("entries"))?;
    if raw.len() != rows * cols || rows == 0 || cols == 0 {
        return Err(bad("entry count"));
    }
    let entries = raw.iter().map(|e| series_from_json(field, e)).collect::<Result<Vec<_>>>()?;
    Ok(SeriesMatrix::new(rows, cols, entries))
}
