//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Curves come back as flat `Float64Array`s; points where a quantity is
//! undefined (the lightcone window, an asymptote before `t = 2z`) are `NaN`
//! so the page can break the line there.

use vacuum_brownian::correlators::{corr_normal, corr_normal_reg, corr_transverse, corr_transverse_reg, mean_e_squared};
use vacuum_brownian::dispersion::{asymptote, closed_form};
use vacuum_brownian::{EvalPoint, Geometry, ParticleSpec, Quantity, RegimeReport, CODATA_2018};
use wasm_bindgen::prelude::*;

fn log_grid(from: f64, to: f64, count: usize) -> Result<Vec<f64>, JsError> {
    if !(from > 0.0 && to > from && count >= 2) {
        return Err(JsError::new("need 0 < from < to and count ≥ 2"));
    }
    Ok((0..count).map(|i| from * (to / from).powf(i as f64 / (count - 1) as f64)).collect())
}

/// `[t/z, closed form, late-time asymptote]` triples at `e = m = z = 1`,
/// log-spaced in `t/z`.
#[wasm_bindgen]
pub fn dispersion_curve(quantity: &str, from: f64, to: f64, count: usize) -> Result<Vec<f64>, JsError> {
    let q: Quantity = quantity.parse().map_err(|e: String| JsError::new(&e))?;
    let mut out = Vec::with_capacity(3 * count);
    for x in log_grid(from, to, count)? {
        let p = EvalPoint::unit(x).map_err(|e| JsError::new(&e.to_string()))?;
        out.push(x);
        out.push(closed_form(q, &p).unwrap_or(f64::NAN));
        out.push(asymptote(q, &p).unwrap_or(f64::NAN));
    }
    Ok(out)
}

/// `[Δt/z, ⟨E_xE_x⟩, ⟨E_zE_z⟩]` triples at `z = 1`, linear in `Δt` from 0 to
/// `dt_max`. A positive `eps` gives the point-split real parts instead.
#[wasm_bindgen]
pub fn correlator_curve(dt_max: f64, count: usize, eps: f64) -> Result<Vec<f64>, JsError> {
    if !(dt_max > 0.0 && count >= 2) {
        return Err(JsError::new("need dt_max > 0 and count ≥ 2"));
    }
    let g = Geometry::new(1.0).expect("unit distance");
    let mut out = Vec::with_capacity(3 * count);
    for i in 0..count {
        let dt = dt_max * i as f64 / (count - 1) as f64;
        let (xx, zz) = if eps > 0.0 {
            (corr_transverse_reg(dt, g, eps), corr_normal_reg(dt, g, eps))
        } else {
            (corr_transverse(dt, g), corr_normal(dt, g))
        };
        out.push(dt);
        out.push(xx.unwrap_or(f64::NAN));
        out.push(zz.unwrap_or(f64::NAN));
    }
    Ok(out)
}

/// `⟨E²⟩` at `z = 1`, the `Δt = 0` value of `2·xx + zz`.
#[wasm_bindgen]
pub fn coincidence_value() -> f64 {
    mean_e_squared(Geometry::new(1.0).expect("unit distance"))
}

/// Regime report for an electron at distance `z_m` metres after `t_over_z`
/// light-crossing times, as a JSON string.
#[wasm_bindgen]
pub fn electron_regimes(z_m: f64, t_over_z: f64) -> Result<String, JsError> {
    let g = Geometry::new(z_m).map_err(|e| JsError::new(&e.to_string()))?;
    let r = RegimeReport::new(&ParticleSpec::electron(), g, t_over_z * z_m, &CODATA_2018)
        .map_err(|e| JsError::new(&e.to_string()))?;
    let c = &CODATA_2018;
    let v = serde_json::json!({
        "effective_temperature_k": r.effective_temperature_k,
        "validity_time_limit_s": c.natural_to_seconds(r.t_validity),
        "radiation_time_limit_s": c.natural_to_seconds(r.t_radiation),
        "t_s": c.natural_to_seconds(r.t),
        "ratio_x": r.ratio_x,
        "ratio_z": r.ratio_z,
        "validity_ok": r.validity_ok,
        "radiation_ok": r.radiation_ok,
    });
    Ok(v.to_string())
}
