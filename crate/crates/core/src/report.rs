//! Canonical JSON rendering shared by every exported report.
//!
//! Keys are sorted, integers travel as decimal strings so nothing is lost
//! past 53 bits, and floats are rounded to 12 significant digits. Two
//! renderings of the same value are byte-identical.

use std::fmt::Display;

use serde_json::{Map, Number, Value};

/// Significant digits kept for floating-point fields.
pub const FLOAT_DIGITS: usize = 12;

/// A float rounded to 12 significant digits. NaN and infinities become the
/// strings `"NaN"`, `"inf"` and `"-inf"`.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        let text = if x.is_nan() {
            "NaN"
        } else if x > 0.0 {
            "inf"
        } else {
            "-inf"
        };
        return Value::String(text.to_string());
    }
    let rounded: f64 = format!("{:.*e}", FLOAT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    // -0.0 and 0.0 should not render differently.
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    Value::Number(Number::from_f64(rounded).expect("finite"))
}

/// An integer as a decimal string.
pub fn integer(x: impl Display) -> Value {
    Value::String(x.to_string())
}

pub fn integers<T: Display>(xs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(xs.into_iter().map(integer).collect())
}

/// Builds an object from `(key, value)` pairs.
pub fn object<K: Into<String>>(fields: impl IntoIterator<Item = (K, Value)>) -> Value {
    Value::Object(
        fields
            .into_iter()
            .map(|(k, v)| (k.into(), v))
            .collect::<Map<_, _>>(),
    )
}

/// Serializes `value` with keys sorted at every level.
pub fn to_canonical_string(value: &Value) -> String {
    serde_json::to_string(&sorted(value)).expect("json values always serialize")
}

/// Pretty variant of [`to_canonical_string`].
pub fn to_canonical_pretty(value: &Value) -> String {
    serde_json::to_string_pretty(&sorted(value)).expect("json values always serialize")
}

fn sorted(value: &Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(&String, &Value)> = map.iter().collect();
            entries.sort_by(|a, b| a.0.cmp(b.0));
            Value::Object(
                entries
                    .into_iter()
                    .map(|(k, v)| (k.clone(), sorted(v)))
                    .collect(),
            )
        }
        Value::Array(items) => Value::Array(items.iter().map(sorted).collect()),
        other => other.clone(),
    }
}
