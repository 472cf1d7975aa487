use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use vacuum_brownian::dispersion::closed_form;
use vacuum_brownian::regimes::effective_temperature;
use vacuum_brownian::{EvalPoint, Geometry, ParticleSpec, Quantity, CODATA_2018};

fn vacbrown(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vacbrown")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn eval_reports_value_units_and_flags() {
    let out = vacbrown(&["eval", "--particle", "electron", "--z", "1e-6m", "--t", "1e-5m", "--quantity", "vel_disp_normal"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = stdout_json(&out);
    let r = &v["results"][0];
    assert_eq!(r["quantity"], "vel_disp_normal");
    assert_eq!(r["value_natural"]["unit"], "c^2");
    assert_eq!(r["value_si"]["unit"], "m^2/s^2");
    let p = EvalPoint::new(1e-5, 1e-6, ParticleSpec::electron()).unwrap();
    let expected = closed_form(Quantity::VelDispNormal, &p).unwrap();
    assert_eq!(r["value_natural"]["value"].as_f64().unwrap(), expected);
    assert_eq!(v["flags"]["validity_ok"], true);
    assert_eq!(v["z"]["unit"], "m");
}

#[test]
fn eval_on_lightcone_exits_3() {
    let out = vacbrown(&["eval", "--t-over-z", "2.0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("lightcone"), "{}", stderr(&out));
}

#[test]
fn eval_argument_errors_exit_2_and_name_the_parameter() {
    let out = vacbrown(&["eval", "--z", "1e-6furlong", "--t-over-z", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--z"));
    let out = vacbrown(&["eval", "--quantity", "vel_disp", "--t-over-z", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--quantity"));
    let out = vacbrown(&["eval", "--quantity", "vel_disp_normal"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--t"));
    assert_eq!(vacbrown(&["eval", "--t", "1m", "--t-over-z", "3"]).status.code(), Some(2));
    assert_eq!(vacbrown(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn eval_oracle_non_convergence_exits_4() {
    let out = vacbrown(&[
        "eval",
        "--particle",
        "unit",
        "--z",
        "1",
        "--t-over-z",
        "1.99999",
        "--lightcone-window",
        "1e-7",
        "--quantity",
        "pos_disp_transverse",
        "--oracle",
        "--max-subdivisions",
        "64",
        "--rel-tol",
        "1e-15",
    ]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
    assert!(stderr(&out).contains("no convergence"));
}

#[test]
fn eval_effective_temperature_matches_library() {
    let out = vacbrown(&["eval", "--quantity", "effective_temperature", "--z", "1e-6m"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = stdout_json(&out);
    let si = &v["results"][0]["value_si"];
    assert_eq!(si["unit"], "K");
    let expected = effective_temperature(&ParticleSpec::electron(), Geometry::new(1e-6).unwrap(), &CODATA_2018);
    assert!(rel(si["value"].as_f64().unwrap(), expected) < 1e-15);
}

#[test]
fn eval_oracle_agrees_after_lightcone() {
    let out = vacbrown(&["eval", "--particle", "unit", "--z", "1", "--t-over-z", "3", "--quantity", "pos_disp_transverse", "--oracle"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = &stdout_json(&out)["results"][0];
    assert!(r["oracle_rel_err"]["value"].as_f64().unwrap() < 1e-4);
}

#[test]
fn sweep_log_grid_has_fixed_header_and_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let out = vacbrown(&[
        "sweep", "--from", "0.1", "--to", "100", "--count", "50", "--quantity", "pos_disp_normal", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let (header, rows) = read_csv(&path);
    assert_eq!(header.join(","), "t,z,t_over_z,quantity,value_natural,value_si,status,validity_ok,radiation_ok");
    assert_eq!(rows.len(), 50);
    // Sweep order is preserved.
    let x: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(x.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn sweep_marks_lightcone_rows_singular_with_empty_value() {
    let out = vacbrown(&["sweep", "--from", "1", "--to", "3", "--count", "3", "--spacing", "lin", "--quantity", "vel_disp_normal"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(2).unwrap();
    assert!(row.contains(",vel_disp_normal,,,singular,"), "{row}");
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn sweep_rows_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rt.csv");
    let out = vacbrown(&[
        "sweep", "--particle", "unit", "--z", "2.5", "--from", "0.01", "--to", "40", "--count", "25", "--quantity",
        "vel_disp_transverse,vel_disp_normal,pos_disp_transverse,pos_disp_normal", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = read_csv(&path);
    assert_eq!(rows.len(), 100);
    for r in rows {
        let (t, z): (f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        let q: Quantity = r[3].parse().unwrap();
        let recorded: f64 = r[4].parse().unwrap();
        let again = closed_form(q, &EvalPoint::new(t, z, ParticleSpec::unit()).unwrap()).unwrap();
        assert!(rel(recorded, again) <= 1e-12, "{r:?}");
    }
}

#[test]
fn sweep_asymptote_gap_small_at_late_times() {
    let out = vacbrown(&[
        "sweep", "--particle", "unit", "--z", "1", "--from", "50", "--to", "1000", "--count", "8", "--quantity",
        "vel_disp_transverse,vel_disp_transverse_asym,vel_disp_normal,vel_disp_normal_asym,pos_disp_normal,pos_disp_normal_asym",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    for pair in rows.chunks(2) {
        let (a, b): (f64, f64) = (pair[0][4].parse().unwrap(), pair[1][4].parse().unwrap());
        assert!(rel(b, a) < 0.01, "{pair:?}");
    }
}

#[test]
fn sweep_json_carries_units() {
    let out = vacbrown(&["sweep", "--from", "1", "--to", "3", "--count", "3", "--quantity", "ratio_x", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["status"], "out_of_range");
    assert!(rows[0]["value_natural"]["value"].is_null());
    assert_eq!(rows[2]["value_natural"]["unit"], "1");
    assert_eq!(rows[2]["t"]["unit"], "m");
}

#[test]
fn sweep_z_and_t_variables() {
    let out = vacbrown(&["sweep", "--var", "z", "--t", "1e-4m", "--from", "1e-6m", "--to", "1e-5m", "--count", "4", "--quantity", "effective_temperature"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let kelvin: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(5).unwrap().parse().unwrap()).collect();
    // T_eff·z² is constant.
    let zs = [1e-6, 1e-6 * 10f64.powf(1.0 / 3.0), 1e-6 * 10f64.powf(2.0 / 3.0), 1e-5];
    for (k, z) in kelvin.iter().zip(zs) {
        assert!(rel(k * z * z, kelvin[0] * 1e-12) < 1e-12);
    }
    let out = vacbrown(&["sweep", "--var", "t", "--z", "1um", "--from", "1ns", "--to", "2ns", "--count", "2", "--quantity", "vel_disp_normal"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn sweep_bad_ranges_exit_2() {
    assert_eq!(vacbrown(&["sweep", "--from", "3", "--to", "1"]).status.code(), Some(2));
    assert_eq!(vacbrown(&["sweep", "--from", "1", "--to", "3", "--count", "1"]).status.code(), Some(2));
    assert_eq!(vacbrown(&["sweep", "--from", "-1", "--to", "3"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_5() {
    let out = vacbrown(&["sweep", "--from", "1", "--to", "3", "--count", "3", "--out", "/nonexistent-dir/out.csv"]);
    assert_eq!(out.status.code(), Some(5));
    let out = vacbrown(&["verify", "--grid", "pre-lightcone", "--out", "/nonexistent-dir/v.csv"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn verify_default_grid_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.csv");
    let out = vacbrown(&["verify", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let (header, rows) = read_csv(&path);
    assert_eq!(header.join(","), "quantity,t_over_z,closed,oracle,rel_err,eps_estimate,pass");
    assert_eq!(rows.len(), 36);
    assert!(rows.iter().all(|r| r[6] == "true"));
    // Post-lightcone rows record the ε-extrapolation estimate.
    assert!(rows.iter().filter(|r| r[1].parse::<f64>().unwrap() > 2.0).all(|r| !r[5].is_empty()));
}

#[test]
fn verify_unattainable_tolerance_exits_1_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.csv");
    let out = vacbrown(&["verify", "--tolerance", "1e-15", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let (_, rows) = read_csv(&path);
    assert_eq!(rows.len(), 36);
    assert!(rows.iter().any(|r| r[6] == "false"));
}

#[test]
fn verify_pre_lightcone_grid() {
    let out = vacbrown(&["verify", "--grid", "pre-lightcone"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 20);
    for r in rows {
        let f: Vec<&str> = r.split(',').collect();
        assert!(f[1].parse::<f64>().unwrap() < 2.0);
        assert!(f[4].parse::<f64>().unwrap() <= 1e-6);
    }
}

#[test]
fn config_file_with_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "particle = \"unit\"\nz = 1.0\nt_over_z = 3.0\nquantity = [\"vel_disp_normal\"]\n").unwrap();
    let c = cfg.to_str().unwrap();

    let v = stdout_json(&vacbrown(&["eval", "--config", c]));
    let expected = closed_form(Quantity::VelDispNormal, &EvalPoint::unit(3.0).unwrap()).unwrap();
    assert_eq!(v["results"][0]["value_natural"]["value"].as_f64().unwrap(), expected);
    assert_eq!(v["particle"]["mass"]["value"], 1.0);

    // A flag overrides the file; the file still fills the rest.
    let v = stdout_json(&vacbrown(&["eval", "--config", c, "--t-over-z", "5"]));
    let expected = closed_form(Quantity::VelDispNormal, &EvalPoint::unit(5.0).unwrap()).unwrap();
    assert_eq!(v["results"][0]["value_natural"]["value"].as_f64().unwrap(), expected);
    let v = stdout_json(&vacbrown(&["eval", "--config", c, "--t", "4"]));
    assert_eq!(v["t_over_z"]["value"], 4.0);

    std::fs::write(&cfg, "nonsense = 1\n").unwrap();
    assert_eq!(vacbrown(&["eval", "--config", c]).status.code(), Some(2));
}

#[test]
fn regimes_report_is_fully_tagged() {
    let out = vacbrown(&["regimes", "--z", "1um", "--t", "10um"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = stdout_json(&out);
    for (key, field) in v.as_object().unwrap() {
        if field.is_object() && key != "particle" {
            assert!(field.get("unit").is_some(), "{key} has no unit");
        } else {
            assert!(!field.is_number(), "{key} is a bare number");
        }
    }
    assert_eq!(v["effective_temperature"]["unit"], "K");
    let ratio = v["radiation_time_limit"]["value"].as_f64().unwrap() / v["validity_time_limit"]["value"].as_f64().unwrap();
    assert!(rel(ratio, 4.6701) < 1e-4);
}

#[test]
fn corr_values_and_singularity() {
    let v = stdout_json(&vacbrown(&["corr", "--z", "1", "--dt", "0"]));
    let xx = v["xx"]["value"].as_f64().unwrap();
    let zz = v["zz"]["value"].as_f64().unwrap();
    let e2 = v["mean_e_squared"]["value"].as_f64().unwrap();
    assert!(rel(2.0 * xx + zz, e2) < 1e-14);
    let out = vacbrown(&["corr", "--z", "1", "--dt", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("lightcone"));
    let out = vacbrown(&["corr", "--z", "1", "--dt", "2", "--eps", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn constants_listing() {
    let v = stdout_json(&vacbrown(&["constants"]));
    assert_eq!(v["fine_structure"]["value"], 7.2973525693e-3);
    assert_eq!(v["electron"]["mass"]["unit"], "m^-1");
}
