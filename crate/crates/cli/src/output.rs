//! Record layout and serialisation. Floats are written in shortest
//! round-trip form, so re-reading a file reproduces every value bit for bit.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Value as Json};
use vacuum_brownian::oracle::verify::VerifyRow;

use crate::commands::CliError;

pub const SWEEP_HEADER: [&str; 9] =
    ["t", "z", "t_over_z", "quantity", "value_natural", "value_si", "status", "validity_ok", "radiation_ok"];

pub const VERIFY_HEADER: [&str; 7] = ["quantity", "t_over_z", "closed", "oracle", "rel_err", "eps_estimate", "pass"];

/// `{"value": v, "unit": u}`.
pub fn tagged(value: f64, unit: &str) -> Json {
    json!({ "value": value, "unit": unit })
}

pub fn tagged_opt(value: Option<f64>, unit: &str) -> Json {
    json!({ "value": value, "unit": unit })
}

pub fn num(v: f64) -> String {
    format!("{v:e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub z: f64,
    pub t_over_z: f64,
    pub quantity: String,
    pub value_natural: Option<f64>,
    pub value_si: Option<f64>,
    pub unit_natural: &'static str,
    pub unit_si: &'static str,
    pub status: &'static str,
    pub validity_ok: bool,
    pub radiation_ok: bool,
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(SWEEP_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            num(r.t),
            num(r.z),
            num(r.t_over_z),
            r.quantity.clone(),
            r.value_natural.map(num).unwrap_or_default(),
            r.value_si.map(num).unwrap_or_default(),
            r.status.to_string(),
            r.validity_ok.to_string(),
            r.radiation_ok.to_string(),
        ])
        .map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub fn sweep_json(rows: &[SweepRow]) -> Vec<u8> {
    let records: Vec<Json> = rows
        .iter()
        .map(|r| {
            json!({
                "t": tagged(r.t, "m"),
                "z": tagged(r.z, "m"),
                "t_over_z": tagged(r.t_over_z, "1"),
                "quantity": r.quantity,
                "value_natural": tagged_opt(r.value_natural, r.unit_natural),
                "value_si": tagged_opt(r.value_si, r.unit_si),
                "status": r.status,
                "validity_ok": r.validity_ok,
                "radiation_ok": r.radiation_ok,
            })
        })
        .collect();
    pretty(&Json::Array(records))
}

pub fn verify_csv(rows: &[VerifyRow]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(VERIFY_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.quantity.name().to_string(),
            num(r.t_over_z),
            num(r.closed),
            num(r.oracle),
            num(r.rel_err),
            r.eps_estimate.map(num).unwrap_or_default(),
            r.pass.to_string(),
        ])
        .map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub fn pretty(v: &Json) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("JSON values always serialise");
    out.push(b'\n');
    out
}

/// Writes to `path`, or to standard output when `None`.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout().lock().write_all(bytes).map_err(|e| CliError::Io(e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortest_round_trip() {
        for v in [0.1, 1.0 / 3.0, 6.332_574_505_360_688e-9, 2.0f64.powi(-1070)] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn empty_value_for_singular_rows() {
        let row = SweepRow {
            t: 2.0,
            z: 1.0,
            t_over_z: 2.0,
            quantity: "vel_disp_normal".into(),
            value_natural: None,
            value_si: None,
            unit_natural: "c^2",
            unit_si: "m^2/s^2",
            status: "singular",
            validity_ok: true,
            radiation_ok: true,
        };
        let text = String::from_utf8(sweep_csv(&[row]).unwrap()).unwrap();
        assert_eq!(text.lines().next().unwrap(), SWEEP_HEADER.join(","));
        assert_eq!(text.lines().nth(1).unwrap(), "2e0,1e0,2e0,vel_disp_normal,,,singular,true,true");
    }
}
