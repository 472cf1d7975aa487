use vacuum_brownian_wasm::{coincidence_value, correlator_curve, dispersion_curve, electron_regimes};

#[test]
fn dispersion_curve_layout() {
    let v = dispersion_curve("vel_disp_normal", 0.1, 100.0, 31).unwrap();
    assert_eq!(v.len(), 93);
    assert_eq!(v[0], 0.1);
    // The asymptote is undefined before the lightcone.
    assert!(v[2].is_nan());
    let last = &v[90..];
    assert!(((last[2] - last[1]) / last[1]).abs() < 1e-6);
}

#[test]
fn correlator_curve_marks_pole() {
    let v = correlator_curve(4.0, 3, 0.0).unwrap();
    assert!((2.0 * v[1] + v[2] - coincidence_value()).abs() < 1e-15);
    assert!(v[4].is_nan() && v[5].is_nan());
    let r = correlator_curve(4.0, 3, 0.01).unwrap();
    assert!(r[4].is_finite());
}

#[test]
fn regimes_json() {
    let s = electron_regimes(1e-6, 10.0).unwrap();
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert!(v["effective_temperature_k"].as_f64().unwrap() > 0.0);
    assert_eq!(v["validity_ok"], true);
}
