use std::path::PathBuf;

use rayon::prelude::*;
use serde_json::{json, Map, Value as Json};
use thiserror::Error;
use vacuum_brownian::correlators::{
    corr_normal, corr_normal_reg, corr_transverse, corr_transverse_reg, mean_e_squared, CorrelatorError,
};
use vacuum_brownian::dispersion::DEFAULT_LIGHTCONE_DELTA;
use vacuum_brownian::oracle::quadrature::QuadratureError;
use vacuum_brownian::oracle::verify::{grid_jobs, verify_point, Grid, VerifyError, VerifyRow};
use vacuum_brownian::oracle::{position_oracle, velocity_oracle, OracleError};
use vacuum_brownian::regimes::DEFAULT_MARGIN;
use vacuum_brownian::{
    Constants, EvalPoint, Geometry, Kind, ParticleSpec, QuadratureSpec, RegimeFlags, RegimeReport, CODATA_2018,
};

use crate::config::{Config, Scalar};
use crate::output::{self, tagged, tagged_opt, SweepRow};
use crate::parse;
use crate::quantity::{Output, Value};
use crate::{Cli, Command, PointArgs};

const DEFAULT_Z: &str = "1um";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Singular(String),
    #[error("{0}")]
    Oracle(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Singular(_) => 3,
            CliError::Oracle(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn from_oracle(e: OracleError) -> CliError {
    match e {
        OracleError::Lightcone { .. } => CliError::Singular(e.to_string()),
        OracleError::Spec(_) => CliError::Usage(e.to_string()),
        OracleError::Quadrature(QuadratureError::BadInterval(_)) => CliError::Usage(e.to_string()),
        _ => CliError::Oracle(e.to_string()),
    }
}

/// Flag, then config, then nothing.
fn pick<T>(flag: Option<T>, config: Option<T>) -> Option<T> {
    flag.or(config)
}

fn pick_text(flag: Option<String>, config: &Option<Scalar>) -> Option<String> {
    flag.or_else(|| config.as_ref().map(Scalar::as_text))
}

struct Ctx {
    config: Config,
    constants: Constants,
}

impl Ctx {
    fn particle(&self, a: &PointArgs) -> Result<ParticleSpec, CliError> {
        let preset = pick(a.particle.clone(), self.config.particle.clone()).unwrap_or_else(|| "electron".into());
        let base = match preset.as_str() {
            "electron" => ParticleSpec::electron_with(&self.constants),
            "unit" => ParticleSpec::unit(),
            other => return Err(usage(format!("--particle: unknown preset `{other}` (electron, unit)"))),
        };
        let charge = pick(a.charge, self.config.charge).unwrap_or(base.charge);
        let mass = match pick_text(a.mass.clone(), &self.config.mass) {
            Some(s) => parse::mass(&s, &self.constants).map_err(|e| usage(format!("--mass: {e}")))?,
            None => base.mass,
        };
        ParticleSpec::new(charge, mass).map_err(|e| usage(format!("--charge/--mass: {e}")))
    }

    fn length(&self, name: &str, s: &str) -> Result<f64, CliError> {
        parse::length_or_time(s, &self.constants).map_err(|e| usage(format!("--{name}: {e}")))
    }

    fn z(&self, a: &PointArgs) -> Result<f64, CliError> {
        let s = pick_text(a.z.clone(), &self.config.z).unwrap_or_else(|| DEFAULT_Z.into());
        self.length("z", &s)
    }

    /// `t` from `--t` or `--t-over-z`; flags as a pair take precedence over the config pair.
    fn t(&self, a: &PointArgs, z: f64) -> Result<Option<f64>, CliError> {
        let (t, ratio) = if a.t.is_some() || a.t_over_z.is_some() {
            (a.t.clone(), a.t_over_z)
        } else {
            (self.config.t.as_ref().map(Scalar::as_text), self.config.t_over_z)
        };
        match (t, ratio) {
            (Some(_), Some(_)) => Err(usage("give either t or t_over_z, not both")),
            (Some(s), None) => self.length("t", &s).map(Some),
            (None, Some(r)) if r.is_finite() && r > 0.0 => Ok(Some(r * z)),
            (None, Some(r)) => Err(usage(format!("--t-over-z must be positive, got {r}"))),
            (None, None) => Ok(None),
        }
    }

    fn window(&self, a: &PointArgs) -> Result<f64, CliError> {
        let w = pick(a.lightcone_window, self.config.lightcone_window).unwrap_or(DEFAULT_LIGHTCONE_DELTA);
        if w.is_finite() && w >= 0.0 {
            Ok(w)
        } else {
            Err(usage(format!("--lightcone-window must be non-negative, got {w}")))
        }
    }

    fn margin(&self, flag: Option<f64>) -> Result<f64, CliError> {
        let m = pick(flag, self.config.margin).unwrap_or(DEFAULT_MARGIN);
        if m.is_finite() && m > 0.0 {
            Ok(m)
        } else {
            Err(usage(format!("--margin must be positive, got {m}")))
        }
    }

    fn quantities(&self, flag: Vec<String>, default: &[Output]) -> Result<Vec<Output>, CliError> {
        let names = if !flag.is_empty() {
            flag
        } else if let Some(n) = self.config.quantity.clone() {
            n.into_vec()
        } else {
            return Ok(default.to_vec());
        };
        names.iter().map(|n| n.trim().parse::<Output>().map_err(|e| usage(format!("--quantity: {e}")))).collect()
    }

    fn quadrature(&self, rel_tol: Option<f64>, max_subdivisions: Option<usize>) -> Result<QuadratureSpec, CliError> {
        let mut q = QuadratureSpec::default();
        if let Some(r) = pick(rel_tol, self.config.rel_tol) {
            q.rel_tol = r;
        }
        if let Some(n) = pick(max_subdivisions, self.config.max_subdivisions) {
            q.max_subdivisions = n;
        }
        q.validate().map_err(|e| usage(format!("--rel-tol/--max-subdivisions: {e}")))?;
        Ok(q)
    }
}

fn flags(p: &EvalPoint, margin: f64) -> RegimeFlags {
    let mut f = RegimeFlags::at(p);
    f.validity_ok = p.t <= margin * vacuum_brownian::regimes::validity_time_limit(&p.particle, p.geometry);
    f.radiation_ok = p.t <= margin * vacuum_brownian::regimes::radiation_time_limit(&p.particle, p.geometry);
    f
}

fn particle_json(p: &ParticleSpec) -> Json {
    json!({ "charge": tagged(p.charge, "1"), "mass": tagged(p.mass, "m^-1") })
}

pub fn run(cli: Cli) -> Result<u8, CliError> {
    let config = match &cli.config {
        Some(path) => Config::load(path).map_err(CliError::Usage)?,
        None => Config::default(),
    };
    let ctx = Ctx { config, constants: CODATA_2018 };
    match cli.command {
        Command::Eval { point, quantity, margin, oracle, rel_tol, max_subdivisions } => {
            eval(&ctx, &point, quantity, margin, oracle, rel_tol, max_subdivisions)
        }
        Command::Sweep { point, var, from, to, count, spacing, quantity, format, out, margin } => {
            sweep(&ctx, &point, SweepArgs { var, from, to, count, spacing, quantity, format, out, margin })
        }
        Command::Verify { grid, tolerance, out, rel_tol, max_subdivisions } => {
            verify(&ctx, grid, tolerance, out, rel_tol, max_subdivisions)
        }
        Command::Regimes { point, margin } => regimes(&ctx, &point, margin),
        Command::Corr { z, dt, eps } => corr(&ctx, z, dt, eps),
        Command::Constants => constants(&ctx),
    }
}

fn eval(
    ctx: &Ctx,
    a: &PointArgs,
    quantity: Vec<String>,
    margin: Option<f64>,
    oracle_flag: bool,
    rel_tol: Option<f64>,
    max_subdivisions: Option<usize>,
) -> Result<u8, CliError> {
    let default: Vec<Output> = vacuum_brownian::Quantity::ALL.iter().map(|&q| Output::Dispersion(q)).collect();
    let outputs = ctx.quantities(quantity, &default)?;
    let particle = ctx.particle(a)?;
    let z = ctx.z(a)?;
    let t = ctx.t(a, z)?;
    let margin = ctx.margin(margin)?;
    let with_oracle = oracle_flag || ctx.config.oracle.unwrap_or(false);
    let spec = ctx.quadrature(rel_tol, max_subdivisions)?;

    if let Some(o) = outputs.iter().find(|o| o.needs_t()) {
        if t.is_none() {
            return Err(usage(format!("--t or --t-over-z is required for `{o}`")));
        }
    }
    // Quantities that do not depend on t are evaluated at an arbitrary t.
    let p = EvalPoint::new(t.unwrap_or(z), z, particle).map_err(usage)?.with_lightcone_delta(ctx.window(a)?);

    let mut results = Vec::with_capacity(outputs.len());
    for o in &outputs {
        let units = o.units();
        let (natural, si) = match o.eval(&p, &ctx.constants) {
            Value::Ok { natural, si } => (natural, si),
            Value::Singular(msg) => return Err(CliError::Singular(format!("`{o}`: {msg}"))),
            Value::OutOfRange(msg) => return Err(usage(format!("`{o}`: {msg}"))),
        };
        let mut r = Map::new();
        r.insert("quantity".into(), json!(o.to_string()));
        r.insert("value_natural".into(), tagged(natural, units.natural));
        r.insert("value_si".into(), tagged(si, units.si));
        r.insert("status".into(), json!("ok"));
        if let (true, Output::Dispersion(q)) = (with_oracle, o) {
            let v = match q.kind() {
                Kind::Velocity => velocity_oracle(q.component(), &p, &spec),
                Kind::Position => position_oracle(q.component(), &p, &spec),
            }
            .map_err(from_oracle)?;
            r.insert("oracle".into(), tagged(v.value, units.natural));
            r.insert("oracle_rel_err".into(), tagged(((v.value - natural) / natural).abs(), "1"));
            r.insert("oracle_quadrature_error".into(), tagged(v.quadrature_error, units.natural));
            r.insert("oracle_eps_estimate".into(), tagged_opt(v.eps_estimate, units.natural));
        }
        results.push(Json::Object(r));
    }

    let mut record = Map::new();
    record.insert("particle".into(), particle_json(&particle));
    record.insert("z".into(), tagged(z, "m"));
    if let Some(t) = t {
        record.insert("t".into(), tagged(t, "m"));
        record.insert("t_seconds".into(), tagged(ctx.constants.natural_to_seconds(t), "s"));
        record.insert("t_over_z".into(), tagged(t / z, "1"));
        record.insert("flags".into(), serde_json::to_value(flags(&p, margin)).expect("plain struct"));
    }
    record.insert("results".into(), Json::Array(results));
    output::emit(None, &output::pretty(&Json::Object(record)))?;
    Ok(0)
}

struct SweepArgs {
    var: Option<String>,
    from: Option<String>,
    to: Option<String>,
    count: Option<usize>,
    spacing: Option<String>,
    quantity: Vec<String>,
    format: Option<String>,
    out: Option<PathBuf>,
    margin: Option<f64>,
}

#[derive(Clone, Copy, PartialEq)]
enum Var {
    T,
    Z,
    TOverZ,
}

/// `count` points from `from` to `to`, endpoints exact.
pub fn spaced(from: f64, to: f64, count: usize, log: bool) -> Vec<f64> {
    (0..count)
        .map(|i| {
            if i + 1 == count {
                return to;
            }
            let s = i as f64 / (count - 1) as f64;
            if log {
                from * (to / from).powf(s)
            } else {
                from + (to - from) * s
            }
        })
        .collect()
}

fn sweep(ctx: &Ctx, a: &PointArgs, s: SweepArgs) -> Result<u8, CliError> {
    let cfg = &ctx.config;
    let var = match pick(s.var, cfg.var.clone()).as_deref().unwrap_or("t-over-z") {
        "t" => Var::T,
        "z" => Var::Z,
        "t-over-z" | "t_over_z" => Var::TOverZ,
        other => return Err(usage(format!("--var: unknown variable `{other}` (t, z, t-over-z)"))),
    };
    let bound = |name: &str, v: Option<String>| -> Result<f64, CliError> {
        let v = v.ok_or_else(|| usage(format!("--{name} is required for sweep")))?;
        match var {
            Var::TOverZ => parse::positive(&format!("--{name}"), &v).map_err(usage),
            _ => ctx.length(name, &v),
        }
    };
    let from = bound("from", pick_text(s.from, &cfg.from))?;
    let to = bound("to", pick_text(s.to, &cfg.to))?;
    let count = pick(s.count, cfg.count).unwrap_or(50);
    if count < 2 {
        return Err(usage(format!("--count must be at least 2, got {count}")));
    }
    if from >= to {
        return Err(usage(format!("--from must be below --to ({from} ≥ {to})")));
    }
    let log = match pick(s.spacing, cfg.spacing.clone()).as_deref().unwrap_or("log") {
        "log" => true,
        "lin" => false,
        other => return Err(usage(format!("--spacing: unknown spacing `{other}` (log, lin)"))),
    };
    let json_out = match pick(s.format, cfg.format.clone()).as_deref().unwrap_or("csv") {
        "csv" => false,
        "json" => true,
        other => return Err(usage(format!("--format: unknown format `{other}` (csv, json)"))),
    };
    let out = s.out.or_else(|| cfg.out.clone().map(PathBuf::from));
    let outputs = ctx.quantities(s.quantity, &Output::all())?;
    let particle = ctx.particle(a)?;
    let margin = ctx.margin(s.margin)?;
    let window = ctx.window(a)?;

    let values = spaced(from, to, count, log);
    let points: Vec<(f64, f64)> = match var {
        Var::TOverZ => {
            let z = ctx.z(a)?;
            values.iter().map(|&x| (x * z, z)).collect()
        }
        Var::T => {
            let z = ctx.z(a)?;
            values.iter().map(|&t| (t, z)).collect()
        }
        Var::Z => {
            let z_guess = values[0];
            let t = ctx.t(a, z_guess)?.ok_or_else(|| usage("--t is required when sweeping z"))?;
            if a.t_over_z.is_some() || (a.t.is_none() && cfg.t_over_z.is_some()) {
                return Err(usage("--t-over-z cannot be fixed while sweeping z; give --t"));
            }
            values.iter().map(|&z| (t, z)).collect()
        }
    };

    let jobs: Vec<((f64, f64), Output)> =
        points.iter().flat_map(|&pt| outputs.iter().map(move |&o| (pt, o))).collect();
    let rows: Vec<SweepRow> = jobs
        .par_iter()
        .map(|&((t, z), o)| -> Result<SweepRow, CliError> {
            let p = EvalPoint::new(t, z, particle).map_err(usage)?.with_lightcone_delta(window);
            let f = flags(&p, margin);
            let units = o.units();
            let (value_natural, value_si, status) = match o.eval(&p, &ctx.constants) {
                Value::Ok { natural, si } => (Some(natural), Some(si), "ok"),
                Value::Singular(_) => (None, None, "singular"),
                Value::OutOfRange(_) => (None, None, "out_of_range"),
            };
            Ok(SweepRow {
                t,
                z,
                t_over_z: t / z,
                quantity: o.to_string(),
                value_natural,
                value_si,
                unit_natural: units.natural,
                unit_si: units.si,
                status,
                validity_ok: f.validity_ok,
                radiation_ok: f.radiation_ok,
            })
        })
        .collect::<Result<_, _>>()?;

    let bytes = if json_out { output::sweep_json(&rows) } else { output::sweep_csv(&rows)? };
    output::emit(out.as_deref(), &bytes)?;
    Ok(0)
}

fn verify(
    ctx: &Ctx,
    grid: Option<String>,
    tolerance: Option<f64>,
    out: Option<PathBuf>,
    rel_tol: Option<f64>,
    max_subdivisions: Option<usize>,
) -> Result<u8, CliError> {
    let grid: Grid = pick(grid, ctx.config.grid.clone())
        .as_deref()
        .unwrap_or("all")
        .parse()
        .map_err(|e| usage(format!("--grid: {e}")))?;
    let tolerance = pick(tolerance, ctx.config.tolerance);
    if let Some(t) = tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(usage(format!("--tolerance must be positive, got {t}")));
        }
    }
    let out = out.or_else(|| ctx.config.out.clone().map(PathBuf::from));
    let spec = ctx.quadrature(rel_tol, max_subdivisions)?;

    let rows: Vec<VerifyRow> = grid_jobs(grid)
        .par_iter()
        .map(|&(q, x)| verify_point(q, x, tolerance, &spec))
        .collect::<Result<_, VerifyError>>()
        .map_err(|e| match e {
            VerifyError::Oracle(o) => from_oracle(o),
            VerifyError::Dispersion(d) => usage(d),
        })?;

    output::emit(out.as_deref(), &output::verify_csv(&rows)?)?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    let worst = |pre: bool| rows.iter().filter(|r| (r.t_over_z < 2.0) == pre).map(|r| r.rel_err).fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
    let show = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.2e}"));
    eprintln!(
        "verify: {}/{} passed; worst rel_err {} before the lightcone, {} after",
        rows.len() - failed,
        rows.len(),
        show(worst(true)),
        show(worst(false))
    );
    Ok(if failed == 0 { 0 } else { 1 })
}

fn regimes(ctx: &Ctx, a: &PointArgs, margin: Option<f64>) -> Result<u8, CliError> {
    let particle = ctx.particle(a)?;
    let z = ctx.z(a)?;
    let t = ctx.t(a, z)?.ok_or_else(|| usage("--t or --t-over-z is required for regimes"))?;
    let margin = ctx.margin(margin)?;
    let geometry = Geometry::new(z).map_err(usage)?;
    let c = &ctx.constants;
    let r = RegimeReport::with_margin(&particle, geometry, t, c, margin).map_err(usage)?;
    let secs = |v: f64| tagged(c.natural_to_seconds(v), "s");
    let record = json!({
        "particle": particle_json(&particle),
        "t": tagged(r.t, "m"),
        "t_seconds": secs(r.t),
        "z": tagged(r.z, "m"),
        "t_over_z": tagged(r.t / r.z, "1"),
        "margin": tagged(r.margin, "1"),
        "validity_time_limit": tagged(r.t_validity, "m"),
        "validity_time_limit_seconds": secs(r.t_validity),
        "radiation_time_limit": tagged(r.t_radiation, "m"),
        "radiation_time_limit_seconds": secs(r.t_radiation),
        "radiated_velocity_sq": tagged(r.radiated_velocity_sq, "c^2"),
        "radiated_velocity_sq_si": tagged(c.velocity_sq_to_si(r.radiated_velocity_sq), "m^2/s^2"),
        "larmor_power": tagged(r.larmor_power, "m^-2"),
        "larmor_power_si": tagged(r.larmor_power * c.hbar_c() * c.speed_of_light, "W"),
        "effective_temperature": tagged(r.effective_temperature_k, "K"),
        "ratio_x": tagged_opt(r.ratio_x, "1"),
        "ratio_x_exact": tagged_opt(r.ratio_x_exact, "1"),
        "ratio_z": tagged(r.ratio_z, "1"),
        "ratio_z_exact": tagged_opt(r.ratio_z_exact, "1"),
        "validity_ok": r.validity_ok,
        "radiation_ok": r.radiation_ok,
    });
    output::emit(None, &output::pretty(&record))?;
    Ok(0)
}

fn corr(ctx: &Ctx, z: Option<String>, dt: Option<String>, eps: Option<String>) -> Result<u8, CliError> {
    let z = pick_text(z, &ctx.config.z).unwrap_or_else(|| DEFAULT_Z.into());
    let z = ctx.length("z", &z)?;
    let dt = pick_text(dt, &ctx.config.dt).ok_or_else(|| usage("--dt is required for corr"))?;
    let dt = parse::signed_length_or_time(&dt, &ctx.constants).map_err(|e| usage(format!("--dt: {e}")))?;
    let geometry = Geometry::new(z).map_err(usage)?;
    let eps = pick_text(eps, &ctx.config.eps).map(|e| ctx.length("eps", &e)).transpose()?;
    let corr_err = |e: CorrelatorError| match e {
        CorrelatorError::Singular { .. } => CliError::Singular(e.to_string()),
        other => usage(other),
    };
    let (xx, zz) = match eps {
        Some(eps) => (
            corr_transverse_reg(dt, geometry, eps).map_err(corr_err)?,
            corr_normal_reg(dt, geometry, eps).map_err(corr_err)?,
        ),
        None => (corr_transverse(dt, geometry).map_err(corr_err)?, corr_normal(dt, geometry).map_err(corr_err)?),
    };
    let record = json!({
        "z": tagged(z, "m"),
        "dt": tagged(dt, "m"),
        "eps": tagged_opt(eps, "m"),
        "xx": tagged(xx, "m^-4"),
        "yy": tagged(xx, "m^-4"),
        "zz": tagged(zz, "m^-4"),
        "mean_e_squared": tagged(mean_e_squared(geometry), "m^-4"),
    });
    output::emit(None, &output::pretty(&record))?;
    Ok(0)
}

fn constants(ctx: &Ctx) -> Result<u8, CliError> {
    let c = &ctx.constants;
    let e = ParticleSpec::electron_with(c);
    let record = json!({
        "fine_structure": tagged(c.fine_structure, "1"),
        "boltzmann": tagged(c.boltzmann, "J/K"),
        "hbar": tagged(c.hbar, "J s"),
        "speed_of_light": tagged(c.speed_of_light, "m/s"),
        "electron_mass": tagged(c.electron_mass, "kg"),
        "hbar_c": tagged(c.hbar_c(), "J m"),
        "electron": particle_json(&e),
    });
    output::emit(None, &output::pretty(&record))?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_hits_endpoints() {
        let v = spaced(0.1, 100.0, 50, true);
        assert_eq!((v.len(), v[0], v[49]), (50, 0.1, 100.0));
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(spaced(1.0, 3.0, 3, false), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage(String::new()).code(), 2);
        assert_eq!(CliError::Singular(String::new()).code(), 3);
        assert_eq!(CliError::Oracle(String::new()).code(), 4);
        assert_eq!(CliError::Io(String::new()).code(), 5);
    }
}
