//! Deterministic JSON serialization for the on-disk formats.
//!
//! Every f64 is written with 17 significant digits (`{:.16e}`), which round
//! trips binary64 exactly; integers print plainly; object keys come out in
//! serde_json's BTreeMap order. Identical data therefore produces
//! byte-identical files, which the verification reports rely on.

use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_value(value: &Value, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&fmt_f64(n.as_f64().expect("f64 number")));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serialization"))
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("key serialization"));
                out.push(':');
                write_value(item, out);
            }
            out.push('}');
        }
    }
}

/// Renders a value to the canonical byte-stable form (with a trailing
/// newline).
pub fn to_string(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, &mut out);
    out.push('\n');
    out
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::format(e.to_string()))
}

pub fn write_file(path: &Path, value: &Value) -> Result<()> {
    std::fs::write(path, to_string(value)).map_err(|source| Error::File {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_file(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::File {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_round_trip_exactly() {
        for &x in &[
            0.0,
            1.0,
            -1.0,
            std::f64::consts::PI,
            2.0_f64.sqrt(),
            1e-300,
            -3.5e120,
            f64::MIN_POSITIVE,
        ] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn integers_print_plainly() {
        let v = json!({"k": 3, "w": [1, 2]});
        assert_eq!(to_string(&v), "{\"k\":3,\"w\":[1,2]}\n");
    }

    #[test]
    fn keys_are_ordered() {
        let v = json!({"zeta": 1, "alpha": 2});
        assert_eq!(to_string(&v), "{\"alpha\":2,\"zeta\":1}\n");
    }

    #[test]
    fn float_values_use_17_digits() {
        let v = json!({"x": 1.0_f64});
        assert_eq!(to_string(&v), "{\"x\":1.0000000000000000e0}\n");
    }

    proptest::proptest! {
        #[test]
        fn arbitrary_finite_floats_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let v = json!({ "x": x });
            let parsed = parse(&to_string(&v)).unwrap();
            let back = parsed["x"].as_f64().unwrap();
            proptest::prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}
