//! Deterministic JSON output: sorted keys and floats rounded to 15 significant digits.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

/// Rounds to 15 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// Rounds every float inside a JSON value.
pub fn rounded(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .and_then(|x| serde_json::Number::from_f64(round_sig(x)))
            .map(Value::Number)
            .unwrap_or(Value::Null),
        Value::Array(a) => Value::Array(a.into_iter().map(rounded).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, rounded(v))).collect()),
        other => other,
    }
}

/// Serializes with stable key order and rounded floats, pretty-printed with a trailing newline.
pub fn to_stable_json<S: Serialize>(value: &S) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Invalid(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&rounded(v)).map_err(|e| Error::Invalid(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
        assert_eq!(round_sig(-0.0), 0.0);
        assert_eq!(round_sig(1e300), 1e300);
        assert_eq!(round_sig(f64::NAN).is_nan(), true);
    }

    #[test]
    fn stable_output() {
        let a = to_stable_json(&json!({"b": 0.1 + 0.2, "a": [1, 2.0000000000000004]})).unwrap();
        assert_eq!(a, "{\n  \"a\": [\n    1,\n    2.0\n  ],\n  \"b\": 0.3\n}\n");
    }
}
