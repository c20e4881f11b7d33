//! Unit-suffixed scalar values such as `3 cm` or `15.6e-23 m^2`.
//!
//! Every supported unit is a power of ten times its SI base, so scaling is
//! done on the decimal exponent before parsing. `3 cm` and `0.03 m` therefore
//! produce the identical `f64`.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Area,
    Time,
    /// Dimensionless factor that also accepts `%`.
    Fraction,
    Dimensionless,
    PerLength,
    /// Nonlinear coefficient, m/V.
    MeterPerVolt,
    /// Responsivity, A/W.
    AmperePerWatt,
    Current,
    Frequency,
    Temperature,
    Resistance,
    Power,
}

impl Dimension {
    /// SI unit written when serializing.
    pub fn si_unit(self) -> &'static str {
        match self {
            Dimension::Length => "m",
            Dimension::Area => "m^2",
            Dimension::Time => "s",
            Dimension::Fraction | Dimension::Dimensionless => "",
            Dimension::PerLength => "1/m",
            Dimension::MeterPerVolt => "m/V",
            Dimension::AmperePerWatt => "A/W",
            Dimension::Current => "A",
            Dimension::Frequency => "Hz",
            Dimension::Temperature => "K",
            Dimension::Resistance => "ohm",
            Dimension::Power => "W",
        }
    }

    /// Power-of-ten exponent of `unit` relative to SI, if the unit belongs
    /// to this dimension.
    fn exponent(self, unit: &str) -> Option<i32> {
        let e = match (self, unit) {
            (Dimension::Fraction | Dimension::Dimensionless, "") => 0,
            (Dimension::Fraction, "%") => -2,
            (Dimension::Length, "m") => 0,
            (Dimension::Length, "km") => 3,
            (Dimension::Length, "cm") => -2,
            (Dimension::Length, "mm") => -3,
            (Dimension::Length, "um" | "µm") => -6,
            (Dimension::Length, "nm") => -9,
            (Dimension::Length, "pm") => -12,
            (Dimension::Area, "m^2" | "m2") => 0,
            (Dimension::Area, "cm^2" | "cm2") => -4,
            (Dimension::Area, "mm^2" | "mm2") => -6,
            (Dimension::Time, "s") => 0,
            (Dimension::Time, "ms") => -3,
            (Dimension::Time, "us" | "µs") => -6,
            (Dimension::Time, "ns") => -9,
            (Dimension::PerLength, "1/m" | "m^-1") => 0,
            (Dimension::PerLength, "1/km" | "km^-1") => -3,
            (Dimension::MeterPerVolt, "m/V") => 0,
            (Dimension::MeterPerVolt, "pm/V") => -12,
            (Dimension::AmperePerWatt, "A/W") => 0,
            (Dimension::AmperePerWatt, "mA/W") => -3,
            (Dimension::Current, "A") => 0,
            (Dimension::Current, "mA") => -3,
            (Dimension::Current, "uA" | "µA") => -6,
            (Dimension::Current, "nA") => -9,
            (Dimension::Frequency, "Hz") => 0,
            (Dimension::Frequency, "kHz") => 3,
            (Dimension::Frequency, "MHz") => 6,
            (Dimension::Frequency, "GHz") => 9,
            (Dimension::Temperature, "K") => 0,
            (Dimension::Resistance, "ohm" | "Ω") => 0,
            (Dimension::Resistance, "kohm" | "kΩ") => 3,
            (Dimension::Resistance, "Mohm" | "MΩ") => 6,
            (Dimension::Power, "W") => 0,
            (Dimension::Power, "mW") => -3,
            (Dimension::Power, "kW") => 3,
            _ => return None,
        };
        Some(e)
    }

    fn examples(self) -> &'static str {
        match self {
            Dimension::Length => "m, cm, mm, um, nm",
            Dimension::Area => "m^2, cm^2, mm^2",
            Dimension::Time => "s, ms, us, ns",
            Dimension::Fraction => "a bare number or %",
            Dimension::Dimensionless => "a bare number",
            Dimension::PerLength => "1/m, 1/km",
            Dimension::MeterPerVolt => "m/V, pm/V",
            Dimension::AmperePerWatt => "A/W",
            Dimension::Current => "A, mA, uA",
            Dimension::Frequency => "Hz, kHz, MHz, GHz",
            Dimension::Temperature => "K",
            Dimension::Resistance => "ohm, kohm",
            Dimension::Power => "W, mW, kW",
        }
    }

    fn requires_unit(self) -> bool {
        !matches!(self, Dimension::Fraction | Dimension::Dimensionless)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitError(pub String);

impl fmt::Display for UnitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UnitError {}

/// Splits `"3.015cm"` or `"3.015 cm"` into number and unit text.
fn split_number(text: &str) -> (&str, &str) {
    let text = text.trim();
    let mut end = 0;
    let bytes = text.as_bytes();
    while end < bytes.len() {
        let c = bytes[end] as char;
        let exponent_sign = (c == '+' || c == '-') && end > 0 && matches!(bytes[end - 1], b'e' | b'E');
        let exponent_mark = (c == 'e' || c == 'E')
            && end > 0
            && bytes.get(end + 1).is_some_and(|n| n.is_ascii_digit() || *n == b'-' || *n == b'+');
        if c.is_ascii_digit() || c == '.' || (end == 0 && (c == '-' || c == '+')) || exponent_sign || exponent_mark {
            end += 1;
        } else {
            break;
        }
    }
    (&text[..end], text[end..].trim())
}

/// Parses a decimal string scaled by `10^shift`, with correct rounding.
fn parse_scaled(number: &str, shift: i32) -> Option<f64> {
    if shift == 0 {
        return number.parse().ok();
    }
    let (mantissa, exp) = match number.find(['e', 'E']) {
        Some(i) => (&number[..i], number[i + 1..].parse::<i32>().ok()?),
        None => (number, 0),
    };
    format!("{mantissa}e{}", exp + shift).parse().ok()
}

/// Parses one quantity. Units are mandatory for dimensioned values unless
/// `allow_bare` is set, in which case a bare number is taken as SI.
pub fn parse_quantity(text: &str, dim: Dimension, allow_bare: bool) -> Result<f64, UnitError> {
    let (number, unit) = split_number(text);
    if number.is_empty() {
        return Err(UnitError(format!("expected a number, found `{}`", text.trim())));
    }
    if unit.is_empty() && dim.requires_unit() && !allow_bare {
        return Err(UnitError(format!(
            "missing unit on `{}` (expected {})",
            text.trim(),
            dim.examples()
        )));
    }
    let shift = if unit.is_empty() { Some(0) } else { dim.exponent(unit) };
    let shift = shift
        .ok_or_else(|| UnitError(format!("unit `{unit}` is not valid here (expected {})", dim.examples())))?;
    let value = parse_scaled(number, shift).ok_or_else(|| UnitError(format!("malformed number `{number}`")))?;
    if !value.is_finite() {
        return Err(UnitError(format!("value `{}` is not finite", text.trim())));
    }
    Ok(value)
}

/// Parses `2, 4, 6, 8 m`: comma-separated numbers sharing a trailing unit.
/// Items may also carry their own units.
pub fn parse_list(text: &str, dim: Dimension) -> Result<Vec<f64>, UnitError> {
    let items: Vec<&str> = text.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(UnitError(format!("empty item in list `{}`", text.trim())));
    }
    let (_, shared_unit) = split_number(items[items.len() - 1]);
    items
        .iter()
        .map(|item| {
            let (_, unit) = split_number(item);
            if unit.is_empty() && !shared_unit.is_empty() {
                parse_quantity(&format!("{item} {shared_unit}"), dim, false)
            } else {
                parse_quantity(item, dim, false)
            }
        })
        .collect()
}

/// SI rendering that parses back to the identical value.
pub fn format_quantity(value: f64, dim: Dimension) -> String {
    let unit = dim.si_unit();
    if unit.is_empty() {
        format!("{value}")
    } else {
        format!("{value} {unit}")
    }
}
