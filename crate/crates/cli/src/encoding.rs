//! JSON encoding of scalars, vectors and matrices, and the output writer.
//!
//! Complex numbers are `[re, im]` pairs (a bare number is read as real),
//! quaternions are `[a, b, c, d]`, matrices are row-major nested arrays.
//! Floats are written with 17 significant digits.

use std::fmt::Write;

use mpinv_core::{ComplexMatrix, Quaternion, QuaternionMatrix, RealMatrix, C64};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::CliError;

/// Largest accepted matrix dimension.
pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Tuple(Vec<f64>),
}

pub type Rows = Vec<Vec<Scalar>>;

fn bad(field: &str, message: impl Into<String>) -> CliError {
    CliError::Input {
        field: field.to_string(),
        message: message.into(),
    }
}

fn finite(field: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad(field, "non-finite number"))
    }
}

pub fn complex_scalar(field: &str, s: &Scalar) -> Result<C64, CliError> {
    match s {
        Scalar::Number(x) => Ok(C64::new(finite(field, *x)?, 0.0)),
        Scalar::Tuple(v) if v.len() == 2 => Ok(C64::new(finite(field, v[0])?, finite(field, v[1])?)),
        Scalar::Tuple(v) => Err(bad(field, format!("complex entry needs 2 components, got {}", v.len()))),
    }
}

pub fn real_scalar(field: &str, s: &Scalar) -> Result<f64, CliError> {
    match s {
        Scalar::Number(x) => finite(field, *x),
        Scalar::Tuple(_) => Err(bad(field, "expected a real number")),
    }
}

pub fn quaternion_scalar(field: &str, s: &Scalar) -> Result<Quaternion, CliError> {
    match s {
        Scalar::Number(x) => Ok(Quaternion::new(finite(field, *x)?, 0.0, 0.0, 0.0)),
        Scalar::Tuple(v) if v.len() == 4 => Ok(Quaternion::new(
            finite(field, v[0])?,
            finite(field, v[1])?,
            finite(field, v[2])?,
            finite(field, v[3])?,
        )),
        Scalar::Tuple(v) => Err(bad(
            field,
            format!("quaternion entry needs 4 components, got {}", v.len()),
        )),
    }
}

fn shape(field: &str, rows: &Rows) -> Result<(usize, usize), CliError> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || c == 0 {
        return Err(bad(field, "matrix must have at least one row and one column"));
    }
    if r > MAX_DIM || c > MAX_DIM {
        return Err(bad(
            field,
            format!("matrix {r}x{c} exceeds the {MAX_DIM}x{MAX_DIM} limit"),
        ));
    }
    if let Some(i) = rows.iter().position(|row| row.len() != c) {
        return Err(bad(
            &format!("{field}[{i}]"),
            format!("row has {} entries, expected {c}", rows[i].len()),
        ));
    }
    Ok((r, c))
}

pub fn complex_matrix(field: &str, rows: &Rows) -> Result<ComplexMatrix, CliError> {
    let (r, c) = shape(field, rows)?;
    let mut m = ComplexMatrix::zeros(r, c);
    for (i, row) in rows.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            m[(i, j)] = complex_scalar(&format!("{field}[{i}][{j}]"), s)?;
        }
    }
    Ok(m)
}

pub fn real_matrix(field: &str, rows: &Rows) -> Result<RealMatrix, CliError> {
    let (r, c) = shape(field, rows)?;
    let mut data = Vec::with_capacity(r * c);
    for (i, row) in rows.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            data.push(real_scalar(&format!("{field}[{i}][{j}]"), s)?);
        }
    }
    Ok(RealMatrix::from_vec(r, c, data)?)
}

pub fn quaternion_matrix(field: &str, rows: &Rows) -> Result<QuaternionMatrix, CliError> {
    let (r, c) = shape(field, rows)?;
    let mut m = QuaternionMatrix::zeros(r, c);
    for (i, row) in rows.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            m.set(i, j, quaternion_scalar(&format!("{field}[{i}][{j}]"), s)?);
        }
    }
    Ok(m)
}

pub fn complex_vector(field: &str, v: &[Scalar]) -> Result<Vec<C64>, CliError> {
    if v.is_empty() || v.len() > MAX_DIM {
        return Err(bad(field, format!("vector length must lie in 1..={MAX_DIM}")));
    }
    v.iter()
        .enumerate()
        .map(|(i, s)| complex_scalar(&format!("{field}[{i}]"), s))
        .collect()
}

pub fn real_vector(field: &str, v: &[f64]) -> Result<Vec<f64>, CliError> {
    if v.is_empty() || v.len() > MAX_DIM {
        return Err(bad(field, format!("vector length must lie in 1..={MAX_DIM}")));
    }
    v.iter()
        .enumerate()
        .map(|(i, &x)| finite(&format!("{field}[{i}]"), x))
        .collect()
}

/// Reads a matrix back from a result value.
pub fn value_complex_matrix(field: &str, v: &Value) -> Result<ComplexMatrix, CliError> {
    let rows: Rows = serde_json::from_value(v.clone()).map_err(|e| bad(field, e.to_string()))?;
    complex_matrix(field, &rows)
}

pub fn value_complex_vector(field: &str, v: &Value) -> Result<Vec<C64>, CliError> {
    let s: Vec<Scalar> = serde_json::from_value(v.clone()).map_err(|e| bad(field, e.to_string()))?;
    complex_vector(field, &s)
}

pub fn value_real_vector(field: &str, v: &Value) -> Result<Vec<f64>, CliError> {
    let s: Vec<f64> = serde_json::from_value(v.clone()).map_err(|e| bad(field, e.to_string()))?;
    real_vector(field, &s)
}

pub fn value_real_matrix(field: &str, v: &Value) -> Result<RealMatrix, CliError> {
    let rows: Rows = serde_json::from_value(v.clone()).map_err(|e| bad(field, e.to_string()))?;
    real_matrix(field, &rows)
}

pub fn value_quaternion_matrix(field: &str, v: &Value) -> Result<QuaternionMatrix, CliError> {
    let rows: Rows = serde_json::from_value(v.clone()).map_err(|e| bad(field, e.to_string()))?;
    quaternion_matrix(field, &rows)
}

pub fn complex_value(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn encode_complex_matrix(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| complex_value(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn encode_real_matrix(m: &RealMatrix) -> Value {
    let s = m.as_slice();
    Value::Array(
        (0..m.rows())
            .map(|i| json!(s[i * m.cols()..(i + 1) * m.cols()].to_vec()))
            .collect(),
    )
}

pub fn encode_quaternion_matrix(m: &QuaternionMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| {
                            let q = m.get(i, j);
                            json!([q.a, q.b, q.c, q.d])
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn encode_complex_vector(v: &[C64]) -> Value {
    Value::Array(v.iter().map(|&z| complex_value(z)).collect())
}

/// Finite floats become numbers, others `null`.
pub fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn is_leaf(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

/// Arrays of scalars and arrays of flat scalar arrays stay on one line.
fn is_inline(items: &[Value]) -> bool {
    items.iter().all(|v| match v {
        Value::Array(inner) => inner.iter().all(is_leaf),
        other => is_leaf(other),
    })
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) if !n.is_f64() => write!(out, "{u}").unwrap(),
            (_, Some(i), _) if !n.is_f64() => write!(out, "{i}").unwrap(),
            (_, _, Some(f)) => out.push_str(&format_float(f)),
            _ => out.push_str("null"),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if is_inline(items) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_value(out, item, indent);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_value(out, item, indent + 1);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                pad(out, indent + 1);
                out.push_str(&serde_json::to_string(key).expect("string serializes"));
                out.push_str(": ");
                write_value(out, item, indent + 1);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

/// Serializes a document; object keys keep their insertion order.
pub fn to_document_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits_and_round_trip() {
        let x: f64 = 0.1 + 0.2;
        let s = to_document_string(&json!({"x": x, "n": 3, "v": [[1.0, -0.0]]}));
        assert!(s.contains("3.0000000000000004e-1"), "{s}");
        assert!(s.contains("\"n\": 3"));
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn entries_are_validated_with_their_position() {
        let rows: Rows = serde_json::from_str("[[1, [0, 2]], [3]]").unwrap();
        let err = complex_matrix("matrix", &rows).unwrap_err();
        assert!(err.to_string().contains("matrix[1]"), "{err}");
        let rows: Rows = serde_json::from_str("[[1, [0, 2, 3]]]").unwrap();
        let err = complex_matrix("matrix", &rows).unwrap_err();
        assert!(err.to_string().contains("matrix[0][1]"), "{err}");
        let q: Rows = serde_json::from_str("[[[1, 2, 3, 4]]]").unwrap();
        assert_eq!(
            quaternion_matrix("q", &q).unwrap().get(0, 0),
            Quaternion::new(1.0, 2.0, 3.0, 4.0)
        );
    }

    #[test]
    fn layout_puts_matrix_rows_on_lines() {
        let m = ComplexMatrix::identity(2);
        let s = to_document_string(&json!({ "m": encode_complex_matrix(&m) }));
        assert_eq!(s.lines().count(), 6, "{s}");
    }
}
