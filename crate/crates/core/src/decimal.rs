//! Fixed three-digit decimal rendering used wherever computed reals leave the
//! process (RDF literals, CSV rows, JSON reports).

use serde::{Serialize, Serializer};

const SCALE: f64 = 1000.0;

/// Rounds half away from zero to three fractional digits.
pub fn round3(x: f64) -> f64 {
    (x * SCALE).round() / SCALE
}

/// Renders `x` with exactly three fractional digits, rounding half-up
/// (away from zero). Non-finite input renders as `0.000`.
pub fn format3(x: f64) -> String {
    if !x.is_finite() {
        return "0.000".to_string();
    }
    let scaled = (x * SCALE).round();
    let negative = scaled < 0.0;
    let magnitude = scaled.abs() as u128;
    let sign = if negative && magnitude != 0 { "-" } else { "" };
    format!("{sign}{}.{:03}", magnitude / 1000, magnitude % 1000)
}

/// `serialize_with` adapter emitting a JSON number with three fractional digits.
pub fn serialize3<S: Serializer>(x: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    let raw = serde_json::value::RawValue::from_string(format3(*x))
        .map_err(serde::ser::Error::custom)?;
    raw.serialize(serializer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_three_digits() {
        assert_eq!(format3(0.0), "0.000");
        assert_eq!(format3(1.0), "1.000");
        assert_eq!(format3(6.473296930943527), "6.473");
        assert_eq!(format3(12.2), "12.200");
        assert_eq!(format3(-2.5), "-2.500");
        assert_eq!(format3(-0.0001), "0.000");
    }

    #[test]
    fn rounds_exact_ties_up() {
        // 0.0625 is exactly representable, so this is a true tie
        assert_eq!(format3(0.0625), "0.063");
        assert_eq!(round3(0.0625), 0.063);
    }

    #[test]
    fn json_number_keeps_trailing_zeros() {
        #[derive(serde::Serialize)]
        struct Row {
            #[serde(serialize_with = "serialize3")]
            v: f64,
        }
        let text = serde_json::to_string(&Row { v: 1.0 }).unwrap();
        assert_eq!(text, r#"{"v":1.000}"#);
    }
}
