//! Number formatting shared by CSV, text and JSON output.
//!
//! Values are rounded to 12 significant digits and then printed in their
//! shortest round-trip form, so CSV and JSON carry the same `f64`.

use serde_json::Value;

/// Rounds to 12 significant digits. Non-finite values pass through.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round12(x);
    if r == 0.0 {
        return "0".into();
    }
    let a = r.abs();
    if (1e-4..1e12).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// JSON number for a finite value, `null` otherwise.
pub fn json_num(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x)).map_or(Value::Null, Value::Number)
}

pub fn json_opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, json_num)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(1.61e-10), "1.61e-10");
        assert_eq!(fmt_num(0.177), "0.177");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(2.0 / 3.0 * 1e-7), "6.66666666667e-8");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        assert_eq!(fmt_num(f64::NAN), "nan");
    }

    #[test]
    fn json_and_text_agree() {
        for x in [0.0717, 1.0 / 7.0, 22.913972274751931, 4.9e-17, -1.25e-9] {
            let j = json_num(x).as_f64().unwrap();
            let t: f64 = fmt_num(x).parse().unwrap();
            assert_eq!(j, t);
        }
        assert_eq!(json_num(f64::INFINITY), Value::Null);
    }
}
