//! Parsing of physical quantities given on the command line or in config.
//!
//! Lengths and times share one natural unit, the metre: `1e-6m`, `3um`,
//! `2Å`, `10ns` and bare numbers (metres) are all accepted.

use vacuum_brownian::Constants;

fn prefix(p: &str) -> Option<f64> {
    Some(match p {
        "" => 1.0,
        "k" => 1e3,
        "c" => 1e-2,
        "m" => 1e-3,
        "u" | "µ" | "μ" => 1e-6,
        "n" => 1e-9,
        "p" => 1e-12,
        "f" => 1e-15,
        "a" => 1e-18,
        _ => return None,
    })
}

fn split_number(s: &str) -> (&str, &str) {
    // The longest prefix that parses as a float is the number.
    let mut end = 0;
    for (i, c) in s.char_indices() {
        let next = i + c.len_utf8();
        if s[..next].parse::<f64>().is_ok() {
            end = next;
        }
    }
    (&s[..end], &s[end..])
}

/// A length or time in natural units (metres of light travel).
pub fn length_or_time(s: &str, constants: &Constants) -> Result<f64, String> {
    match any_length(s, constants)? {
        v if v > 0.0 => Ok(v),
        _ => Err(format!("`{}` must be positive and finite", s.trim())),
    }
}

/// As [`length_or_time`], but zero and negative values are allowed.
pub fn signed_length_or_time(s: &str, constants: &Constants) -> Result<f64, String> {
    any_length(s, constants)
}

fn any_length(s: &str, constants: &Constants) -> Result<f64, String> {
    let s = s.trim();
    let (num, unit) = split_number(s);
    let value: f64 = num.parse().map_err(|_| format!("`{s}` is not a number with an optional m/s unit"))?;
    let unit = unit.trim();
    let natural = if unit.is_empty() {
        value
    } else if unit == "Å" || unit == "A" {
        value * 1e-10
    } else if let Some(p) = unit.strip_suffix('m') {
        value * prefix(p).ok_or_else(|| format!("unknown prefix in `{s}`"))?
    } else if let Some(p) = unit.strip_suffix('s') {
        constants.seconds_to_natural(value * prefix(p).ok_or_else(|| format!("unknown prefix in `{s}`"))?)
    } else {
        return Err(format!("unknown unit `{unit}` in `{s}` (use m or s)"));
    };
    if natural.is_finite() {
        Ok(natural)
    } else {
        Err(format!("`{s}` must be finite"))
    }
}

/// Mass in m⁻¹, or in kilograms with a `kg` suffix.
pub fn mass(s: &str, constants: &Constants) -> Result<f64, String> {
    let s = s.trim();
    let (num, unit) = split_number(s);
    let value: f64 = num.parse().map_err(|_| format!("`{s}` is not a mass"))?;
    match unit.trim() {
        "" => Ok(value),
        "kg" => constants.mass_to_natural(value).map_err(|e| e.to_string()),
        other => Err(format!("unknown mass unit `{other}` (use kg or none for m^-1)")),
    }
}

pub fn positive(name: &str, s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("{name} must be a positive number, got `{s}`")),
    }
}
