//! Serialization shared by every report: JSON with sorted keys and floats
//! written with 17 significant digits, so any double re-parses to itself.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::vectorspace::Vector;

/// `x` with 17 significant digits, e.g. `1.4142135623730951e0`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Coordinates joined with `;`, for CSV cells.
pub fn fmt_coords(v: &Vector) -> String {
    v.coords().iter().map(|c| fmt_f64(*c)).collect::<Vec<_>>().join(";")
}

struct SigDigits;

impl Formatter for SigDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with lexicographically sorted object keys.
pub fn to_json<T: Serialize>(value: &T) -> String {
    // `serde_json::Value` keeps objects in a `BTreeMap`, which sorts the keys.
    let value = serde_json::to_value(value).expect("report types serialize to JSON");
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits);
    value.serialize(&mut ser).expect("writing JSON to memory");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use serde_json::json;

    #[test]
    fn keys_are_sorted_and_floats_padded() {
        let text = to_json(&json!({"zeta": 1.5, "alpha": [0.1, 2], "mid": null}));
        assert_eq!(
            text,
            "{\"alpha\":[1.0000000000000001e-1,2],\"mid\":null,\"zeta\":1.5000000000000000e0}\n"
        );
    }

    proptest! {
        #[test]
        fn floats_round_trip_exactly(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            let text = to_json(&json!({ "v": x }));
            let back: serde_json::Value = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back["v"].as_f64().unwrap().to_bits(), x.to_bits());
        }
    }
}
