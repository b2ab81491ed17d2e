//! Matrix JSON: `[[int, ...], ...]` row-major, rationals as `"a/b"` strings.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::mat::Mat;
use crate::rank::{ConstructionTrace, FieldMat};
use serde_json::{json, Value};

/// A parsed entry: `num / den` with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Entry {
    pub num: i128,
    pub den: i128,
}

fn parse_int(s: &str) -> Result<i128> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
}

fn parse_entry(v: &Value) -> Result<Entry> {
    match v {
        Value::Number(x) => {
            let num = x
                .as_i64()
                .map(i128::from)
                .or_else(|| x.as_u64().map(i128::from))
                .ok_or_else(|| Error::Parse(format!("non-integer entry {x}")))?;
            Ok(Entry { num, den: 1 })
        }
        Value::String(s) => {
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (parse_int(a)?, parse_int(b)?),
                None => (parse_int(s)?, 1),
            };
            if den == 0 {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Entry { num, den })
        }
        other => Err(Error::Parse(format!("bad matrix entry {other}"))),
    }
}

/// Parses a rectangular, nonempty matrix.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<Entry>>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be a JSON array of rows".into()))?;
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    let parsed: Vec<Vec<Entry>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Parse("each row must be an array".into()))?
                .iter()
                .map(parse_entry)
                .collect()
        })
        .collect::<Result<_>>()?;
    let cols = parsed[0].len();
    if let Some(r) = parsed.iter().find(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch(r.len(), cols));
    }
    Ok(parsed)
}

/// Parses a square integer matrix.
pub fn parse_int_matrix(text: &str) -> Result<Mat> {
    let rows = parse_matrix(text)?;
    let ints: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|e| match e.den {
                    1 => Ok(e.num),
                    _ => Err(Error::Parse(format!("{}/{} is not an integer", e.num, e.den))),
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Mat::from_rows(&ints)
}

pub fn parse_field_matrix<F: Field>(field: &F, text: &str) -> Result<FieldMat<F>> {
    let rows = parse_matrix(text)?;
    let cols = rows[0].len();
    let elems: Vec<Vec<F::Elem>> = rows
        .iter()
        .map(|r| r.iter().map(|e| field.from_ratio(e.num, e.den)).collect())
        .collect::<Result<_>>()?;
    FieldMat::from_rows(field, cols, &elems)
}

fn entry_json(s: String) -> Value {
    match s.parse::<i64>() {
        Ok(v) => json!(v),
        Err(_) => json!(s),
    }
}

fn rows_json<F: Field>(field: &F, rows: &[Vec<F::Elem>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(|e| entry_json(field.format(e))).collect()))
            .collect(),
    )
}

pub fn mat_json(a: &Mat) -> Value {
    Value::Array(
        a.rows()
            .into_iter()
            .map(|r| Value::Array(r.into_iter().map(|v| entry_json(v.to_string())).collect()))
            .collect(),
    )
}

pub fn field_mat_json<F: Field>(a: &FieldMat<F>) -> Value {
    rows_json(a.field(), &a.row_vecs())
}

/// `{null_basis, rref_rows, pivots, b_prime, b}`.
pub fn trace_json<F: Field>(t: &ConstructionTrace<F>) -> Value {
    let f = t.b.field();
    json!({
        "null_basis": rows_json(f, &t.null_basis),
        "rref_rows": rows_json(f, &t.rref_rows),
        "pivots": t.pivots,
        "b_prime": field_mat_json(&t.b_prime),
        "b": field_mat_json(&t.b),
    })
}
