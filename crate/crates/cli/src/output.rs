//! Report serialization: JSON with full-precision floats, text with
//! readable 7-significant-digit rounding, CSV for probe data.

use std::io;

use serde::Serialize;

/// Serializes to JSON with every float written at 17 significant digits,
/// which round-trips `f64` exactly.
pub fn to_json(value: &impl Serialize) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision);
    value.serialize(&mut ser).expect("report serialization cannot fail");
    String::from_utf8(out).expect("serializer emits UTF-8")
}

struct FullPrecision;

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{}", float17(value))
    }
}

/// 17-significant-digit scientific form, valid as a JSON number.
pub fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Rounds to `sig` significant digits for text output, preferring plain
/// decimal notation at moderate magnitudes.
pub fn format_sig(x: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..sig as i32).contains(&mag) {
        let decimals = (sig as i32 - 1 - mag).max(0) as usize;
        trim_decimal(&format!("{x:.decimals$}"))
    } else {
        let s = format!("{:.*e}", sig - 1, x);
        match s.split_once('e') {
            Some((mantissa, exp)) => format!("{}e{exp}", trim_decimal(mantissa)),
            None => s,
        }
    }
}

fn trim_decimal(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_floats_round_trip() {
        for v in [5f64.sqrt(), -3.6420803239278795e-16, 1.0, 0.0, 1e300] {
            let s = to_json(&v);
            let back: f64 = serde_json::from_str(&s).unwrap();
            assert_eq!(back, v, "via {s}");
        }
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(2.23606797749979, 7), "2.236068");
        assert_eq!(format_sig(2.0, 7), "2");
        assert_eq!(format_sig(0.4472135954999579, 7), "0.4472136");
        assert_eq!(format_sig(-1.5e-9, 7), "-1.5e-9");
        assert_eq!(format_sig(123456789.0, 7), "1.234568e8");
        assert_eq!(format_sig(0.0, 7), "0");
    }
}
