//! Shared helpers for key-value text and JSON renderings of reports.
//! Indices are rendered 1-based, matching matrix notation.

use serde_json::{json, Value};

use crate::matrix::{FloatMatrix, RatMatrix};
use crate::rational::{self, Rational};

pub fn rational_json(v: &Rational) -> Value {
    Value::String(rational::format(v))
}

pub fn rationals_json(vs: &[Rational]) -> Value {
    Value::Array(vs.iter().map(rational_json).collect())
}

pub fn matrix_json(m: &RatMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|row| rationals_json(row))
            .collect(),
    )
}

pub fn float_matrix_json(m: &FloatMatrix) -> Value {
    json!(m.to_rows())
}

pub fn rationals_text(vs: &[Rational]) -> String {
    vs.iter().map(rational::format).collect::<Vec<_>>().join(" ")
}

/// Single-line matrix: rows separated by `;`.
pub fn matrix_text(m: &RatMatrix) -> String {
    m.to_rows()
        .iter()
        .map(|row| rationals_text(row))
        .collect::<Vec<_>>()
        .join("; ")
}
