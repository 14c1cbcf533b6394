//! Unit handling and physical constants.
//!
//! All quantities are stored internally in SI base units (joule, watt, hertz,
//! second, volt, ampere, farad, kelvin, metre). Profile and scenario files may
//! give a quantity either as a bare number (already in SI units) or as a
//! string with a scaled suffix, e.g. `"10 mW"`, `"500 fJ"`, `"0.125 MBaud"`.
//! A suffix whose base unit does not match the field's declared unit is a
//! load error naming the field.
//!
//! dB-valued fields (`*_db`) are converted to linear ratios on load via
//! `10^(dB/10)` and stored linear; every equation downstream uses linear
//! quantities.

use crate::error::{Error, Result};

/// Boltzmann constant, J/K (exact SI value).
pub const BOLTZMANN: f64 = 1.380649e-23;
/// Elementary charge, C (exact SI value).
pub const ELEMENTARY_CHARGE: f64 = 1.602176634e-19;
/// Speed of light in vacuum, m/s (exact SI value).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Base unit a numeric field is declared in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Watt,
    Joule,
    Hertz,
    Second,
    Volt,
    Ampere,
    Farad,
    Kelvin,
    Metre,
    Baud,
    Decibel,
    /// ADC/DAC figure of merit, joule per conversion step.
    JoulePerConv,
    /// Memory access energy, joule per bit.
    JoulePerBit,
    /// Memory leakage, watt per bit.
    WattPerBit,
    /// Noise power spectral density, watt per hertz.
    WattPerHertz,
    Dimensionless,
}

impl Unit {
    /// Canonical suffix symbol accepted in files (after an SI prefix).
    fn symbols(self) -> &'static [&'static str] {
        match self {
            Unit::Watt => &["W"],
            Unit::Joule => &["J"],
            Unit::Hertz => &["Hz"],
            Unit::Second => &["s"],
            Unit::Volt => &["V"],
            Unit::Ampere => &["A"],
            Unit::Farad => &["F"],
            Unit::Kelvin => &["K"],
            Unit::Metre => &["m"],
            Unit::Baud => &["Baud", "baud"],
            Unit::Decibel => &["dB"],
            Unit::JoulePerConv => &["J/conv.", "J/conv", "J"],
            Unit::JoulePerBit => &["J/bit"],
            Unit::WattPerBit => &["W/bit"],
            Unit::WattPerHertz => &["W/Hz"],
            Unit::Dimensionless => &[""],
        }
    }
}

/// Decimal exponent of an SI prefix, or `None` for an unknown prefix.
fn prefix_exponent(prefix: &str) -> Option<i32> {
    Some(match prefix {
        "" => 0,
        "f" => -15,
        "p" => -12,
        "n" => -9,
        "u" | "µ" | "μ" => -6,
        "m" => -3,
        "k" => 3,
        "M" => 6,
        "G" => 9,
        "T" => 12,
        _ => return None,
    })
}

/// Parses a quantity string like `"22.5 mW"` against the expected unit.
/// Returns the value scaled to the SI base unit (dB values are returned as
/// dB; the caller decides whether to linearize).
pub fn parse_quantity(field: &str, raw: &str, expected: Unit) -> Result<f64> {
    let raw = raw.trim();
    // Split the leading numeric part from the suffix.
    let split = raw
        .find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E')))
        .unwrap_or(raw.len());
    // A bare exponent letter ('e'/'E') followed by the suffix can over-consume;
    // back off until the numeric part parses.
    let mut num_end = split;
    let value = loop {
        match raw[..num_end].trim().parse::<f64>() {
            Ok(v) => break v,
            Err(_) if num_end > 0 => num_end -= 1,
            Err(_) => {
                return Err(Error::validation(
                    field,
                    format!("cannot parse quantity '{raw}'"),
                ))
            }
        }
    };
    let number = raw[..num_end].trim();
    let suffix = raw[num_end..].trim();
    if suffix.is_empty() {
        return Ok(value);
    }
    for symbol in expected.symbols() {
        if symbol.is_empty() {
            continue;
        }
        if let Some(prefix) = suffix.strip_suffix(symbol) {
            if let Some(exponent) = prefix_exponent(prefix.trim()) {
                // Fold the prefix into the decimal string where possible so
                // the scaled value rounds once.
                if !number.contains(['e', 'E']) {
                    if let Ok(v) = format!("{number}e{exponent}").parse::<f64>() {
                        return Ok(v);
                    }
                }
                return Ok(value * 10f64.powi(exponent));
            }
        }
    }
    Err(Error::validation(
        field,
        format!(
            "unit suffix '{suffix}' does not match the declared unit {:?}",
            expected
        ),
    ))
}

/// dB to linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to dB.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_bare_numbers_as_si() {
        assert_eq!(parse_quantity("x", "0.0225", Unit::Watt).unwrap(), 0.0225);
    }

    #[test]
    fn parses_scaled_suffixes() {
        assert_eq!(parse_quantity("x", "22.5 mW", Unit::Watt).unwrap(), 22.5e-3);
        assert_eq!(parse_quantity("x", "500 fJ", Unit::JoulePerConv).unwrap(), 500e-15);
        assert_eq!(parse_quantity("x", "16 kHz", Unit::Hertz).unwrap(), 16e3);
        assert_eq!(parse_quantity("x", "0.125 MBaud", Unit::Baud).unwrap(), 0.125e6);
        assert_eq!(parse_quantity("x", "2.4 GHz", Unit::Hertz).unwrap(), 2.4e9);
        assert_eq!(parse_quantity("x", "100 µV", Unit::Volt).unwrap(), 100e-6);
        assert_eq!(parse_quantity("x", "10 uA", Unit::Ampere).unwrap(), 10e-6);
        assert_eq!(parse_quantity("x", "1 pF", Unit::Farad).unwrap(), 1e-12);
    }

    #[test]
    fn parses_scientific_notation() {
        assert_eq!(parse_quantity("x", "1e-3 W", Unit::Watt).unwrap(), 1e-3);
        assert_eq!(parse_quantity("x", "4.0039e-21", Unit::WattPerHertz).unwrap(), 4.0039e-21);
    }

    #[test]
    fn rejects_mismatched_unit() {
        let err = parse_quantity("comm.p_lo_w", "22.5 kHz", Unit::Watt).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("comm.p_lo_w"), "{msg}");
        assert!(msg.contains("kHz"), "{msg}");
    }

    #[test]
    fn db_round_trip() {
        let linear = db_to_linear(16.0);
        assert!((linear - 39.810717055349734).abs() < 1e-12);
        assert!((linear_to_db(linear) - 16.0).abs() < 1e-12);
    }
}
