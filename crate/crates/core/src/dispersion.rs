//! Mean-squared velocity and position dispersions of a test charge that is
//! released at rest at `t = 0` a distance `z` from the plate.
//!
//! All closed forms share the prefactor `e²/(π²m²)`. Logarithms of squared
//! ratios are evaluated as `2·ln|X|`, with `atanh`/`ln_1p` so that the
//! arguments close to one do not lose digits. Below `t/z = 10⁻²` the terms of
//! the position dispersions cancel to `O(t⁴)`; there the closed forms are
//! replaced by their Taylor series in `t`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::correlators::Geometry;
use crate::regimes;
use crate::units::{require_positive, ParticleSpec, UnitsError};

/// Default relative half-width `δ` of the lightcone refusal window `|t − 2z| < δ·z`.
pub const DEFAULT_LIGHTCONE_DELTA: f64 = 1e-6;

/// Below this `t/z` the closed forms delegate to [`small_t_series`].
pub const SERIES_SWITCH: f64 = 1e-2;

/// Asymptote results at `t < LATE_TIME·z` are flagged as outside the late-time regime.
pub const LATE_TIME: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DispersionError {
    #[error("t = {t} is on the lightcone t = 2z = {lightcone} (distance to pole {pole_distance:e})")]
    Singular { t: f64, lightcone: f64, pole_distance: f64 },
    #[error("small-t series requires t < z (t = {t}, z = {z})")]
    SeriesRange { t: f64, z: f64 },
    #[error("late-time asymptote requires t > 2z (t = {t}, z = {z})")]
    AsymptoteRange { t: f64, z: f64 },
    #[error("{0}")]
    Domain(#[from] UnitsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    X,
    Y,
    Z,
}

impl Component {
    pub fn is_normal(self) -> bool {
        self == Component::Z
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Velocity,
    Position,
}

/// One of the four dispersions; transverse covers both `x` and `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    VelDispTransverse,
    VelDispNormal,
    PosDispTransverse,
    PosDispNormal,
}

impl Quantity {
    pub const ALL: [Quantity; 4] =
        [Quantity::VelDispTransverse, Quantity::VelDispNormal, Quantity::PosDispTransverse, Quantity::PosDispNormal];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::VelDispTransverse => "vel_disp_transverse",
            Quantity::VelDispNormal => "vel_disp_normal",
            Quantity::PosDispTransverse => "pos_disp_transverse",
            Quantity::PosDispNormal => "pos_disp_normal",
        }
    }

    pub fn kind(self) -> Kind {
        match self {
            Quantity::VelDispTransverse | Quantity::VelDispNormal => Kind::Velocity,
            Quantity::PosDispTransverse | Quantity::PosDispNormal => Kind::Position,
        }
    }

    pub fn is_normal(self) -> bool {
        matches!(self, Quantity::VelDispNormal | Quantity::PosDispNormal)
    }

    pub fn of(kind: Kind, component: Component) -> Self {
        match (kind, component.is_normal()) {
            (Kind::Velocity, false) => Quantity::VelDispTransverse,
            (Kind::Velocity, true) => Quantity::VelDispNormal,
            (Kind::Position, false) => Quantity::PosDispTransverse,
            (Kind::Position, true) => Quantity::PosDispNormal,
        }
    }

    /// Representative component (`x` for transverse).
    pub fn component(self) -> Component {
        if self.is_normal() {
            Component::Z
        } else {
            Component::X
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| format!("unknown dispersion quantity `{s}`"))
    }
}

/// Elapsed time, distance and particle at which a dispersion is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalPoint {
    pub t: f64,
    pub geometry: Geometry,
    pub particle: ParticleSpec,
    pub lightcone_delta: f64,
}

impl EvalPoint {
    pub fn new(t: f64, z: f64, particle: ParticleSpec) -> Result<Self, UnitsError> {
        Ok(Self {
            t: require_positive("time t", t)?,
            geometry: Geometry::new(z)?,
            particle,
            lightcone_delta: DEFAULT_LIGHTCONE_DELTA,
        })
    }

    /// `e = m = 1` at the given `t/z` with `z = 1`.
    pub fn unit(t_over_z: f64) -> Result<Self, UnitsError> {
        Self::new(t_over_z, 1.0, ParticleSpec::unit())
    }

    pub fn with_lightcone_delta(mut self, delta: f64) -> Self {
        self.lightcone_delta = delta;
        self
    }

    pub fn with_t(mut self, t: f64) -> Result<Self, UnitsError> {
        self.t = require_positive("time t", t)?;
        Ok(self)
    }

    pub fn z(&self) -> f64 {
        self.geometry.z()
    }

    pub fn t_over_z(&self) -> f64 {
        self.t / self.z()
    }

    pub fn near_lightcone(&self) -> bool {
        (self.t - 2.0 * self.z()).abs() < self.lightcone_delta * self.z()
    }

    fn check_lightcone(&self) -> Result<(), DispersionError> {
        if self.near_lightcone() {
            return Err(DispersionError::Singular {
                t: self.t,
                lightcone: 2.0 * self.z(),
                pole_distance: (self.t - 2.0 * self.z()).abs(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegimeFlags {
    /// `t` within the margin of the position-drift bound.
    pub validity_ok: bool,
    /// `t` within the margin of the radiation-reaction bound.
    pub radiation_ok: bool,
    pub near_lightcone: bool,
    /// `t ≥ 10z`, where the late-time asymptotes apply.
    pub late_time: bool,
}

impl RegimeFlags {
    pub fn at(p: &EvalPoint) -> Self {
        let margin = regimes::DEFAULT_MARGIN;
        Self {
            validity_ok: p.t <= margin * regimes::validity_time_limit(&p.particle, p.geometry),
            radiation_ok: p.t <= margin * regimes::radiation_time_limit(&p.particle, p.geometry),
            near_lightcone: p.near_lightcone(),
            late_time: p.t >= LATE_TIME * p.z(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionResult {
    pub quantity: Quantity,
    pub component: Component,
    pub kind: Kind,
    /// Velocity² (dimensionless) or length² [m²].
    pub value: f64,
    pub flags: RegimeFlags,
}

impl DispersionResult {
    fn new(quantity: Quantity, component: Component, value: f64, p: &EvalPoint) -> Self {
        Self { quantity, component, kind: quantity.kind(), value, flags: RegimeFlags::at(p) }
    }
}

/// `ln((t+2z)²/(t−2z)²) = 2 ln((t+2z)/|t−2z|)` written as `4·atanh`.
fn squared_log(t: f64, z: f64) -> f64 {
    let s = t / (2.0 * z);
    if s < 1.0 {
        4.0 * s.atanh()
    } else {
        4.0 * s.recip().atanh()
    }
}

/// `ln(|t² − 4z²| / 4z²)`.
fn gap_log(t: f64, z: f64) -> f64 {
    let s = t / (2.0 * z);
    if s < 1.0 {
        (-s * s).ln_1p()
    } else {
        ((s - 1.0) * (s + 1.0)).ln()
    }
}

/// Bracketed closed form (without `e²/π²m²`), evaluated directly with no
/// cancellation guard. Valid for any `t > 0`, `t ≠ 2z`.
pub fn closed_form_bracket(q: Quantity, t: f64, z: f64) -> f64 {
    let (z2, z3) = (z * z, z * z * z);
    let sl = squared_log(t, z);
    match q {
        Quantity::VelDispTransverse => t / (64.0 * z3) * sl - t * t / (8.0 * z2 * (t - 2.0 * z) * (t + 2.0 * z)),
        Quantity::VelDispNormal => t / (32.0 * z3) * sl,
        Quantity::PosDispTransverse => t.powi(3) / (192.0 * z3) * sl - t * t / (24.0 * z2) - gap_log(t, z) / 6.0,
        Quantity::PosDispNormal => t * t / (24.0 * z2) + t.powi(3) / (96.0 * z3) * sl + gap_log(t, z) / 6.0,
    }
}

/// Closed-form dispersion; below `t/z = 10⁻²` this returns the converged
/// small-time series instead.
pub fn closed_form(q: Quantity, p: &EvalPoint) -> Result<f64, DispersionError> {
    p.check_lightcone()?;
    if p.t_over_z() < SERIES_SWITCH {
        return Ok(small_t_series_converged(q, p)?.value);
    }
    Ok(p.particle.dispersion_prefactor() * closed_form_bracket(q, p.t, p.z()))
}

pub fn dispersion(q: Quantity, p: &EvalPoint) -> Result<DispersionResult, DispersionError> {
    Ok(DispersionResult::new(q, q.component(), closed_form(q, p)?, p))
}

pub fn vel_disp_transverse(p: &EvalPoint) -> Result<DispersionResult, DispersionError> {
    dispersion(Quantity::VelDispTransverse, p)
}

pub fn vel_disp_normal(p: &EvalPoint) -> Result<DispersionResult, DispersionError> {
    dispersion(Quantity::VelDispNormal, p)
}

pub fn pos_disp_transverse(p: &EvalPoint) -> Result<DispersionResult, DispersionError> {
    dispersion(Quantity::PosDispTransverse, p)
}

pub fn pos_disp_normal(p: &EvalPoint) -> Result<DispersionResult, DispersionError> {
    dispersion(Quantity::PosDispNormal, p)
}

/// `⟨Δv_i²⟩` for an explicit Cartesian component.
pub fn vel_disp(component: Component, p: &EvalPoint) -> Result<DispersionResult, DispersionError> {
    let q = Quantity::of(Kind::Velocity, component);
    Ok(DispersionResult::new(q, component, closed_form(q, p)?, p))
}

/// `⟨Δx_i²⟩` for an explicit Cartesian component.
pub fn pos_disp(component: Component, p: &EvalPoint) -> Result<DispersionResult, DispersionError> {
    let q = Quantity::of(Kind::Position, component);
    Ok(DispersionResult::new(q, component, closed_form(q, p)?, p))
}

/// Leading late-time (`t ≫ z`) behaviour of each dispersion.
pub fn asymptote(q: Quantity, p: &EvalPoint) -> Result<f64, DispersionError> {
    let (t, z) = (p.t, p.z());
    if t <= 2.0 * z {
        return Err(DispersionError::AsymptoteRange { t, z });
    }
    let bracket = match q {
        Quantity::VelDispTransverse => -1.0 / (3.0 * t * t) - 8.0 * z * z / (5.0 * t.powi(4)),
        Quantity::VelDispNormal => 1.0 / (4.0 * z * z) + 1.0 / (3.0 * t * t),
        Quantity::PosDispTransverse => -(t / (2.0 * z)).ln() / 3.0,
        Quantity::PosDispNormal => t * t / (8.0 * z * z) + (t / (2.0 * z)).ln() / 3.0 + 1.0 / 9.0,
    };
    Ok(p.particle.dispersion_prefactor() * bracket)
}

pub fn asymptote_result(q: Quantity, p: &EvalPoint) -> Result<DispersionResult, DispersionError> {
    Ok(DispersionResult::new(q, q.component(), asymptote(q, p)?, p))
}

pub fn vel_disp_transverse_asym(p: &EvalPoint) -> Result<DispersionResult, DispersionError> {
    asymptote_result(Quantity::VelDispTransverse, p)
}

pub fn vel_disp_normal_asym(p: &EvalPoint) -> Result<DispersionResult, DispersionError> {
    asymptote_result(Quantity::VelDispNormal, p)
}

pub fn pos_disp_transverse_asym(p: &EvalPoint) -> Result<DispersionResult, DispersionError> {
    asymptote_result(Quantity::PosDispTransverse, p)
}

pub fn pos_disp_normal_asym(p: &EvalPoint) -> Result<DispersionResult, DispersionError> {
    asymptote_result(Quantity::PosDispNormal, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Upper bound on the omitted tail (all terms are positive).
    pub truncation_bound: f64,
    /// Highest power of `t` kept.
    pub order: u32,
}

// Coefficient of τ^{2k} in the kernel, times 16π²z⁴(4z²)^k.
fn kernel_weight(q: Quantity, k: u32) -> f64 {
    let k1 = f64::from(k + 1);
    if q.is_normal() {
        k1
    } else {
        k1 * k1
    }
}

// ∫₀ᵗ W(τ,t) τ^{2k} dτ / t^{power(k)}.
fn moment(kind: Kind, k: u32) -> f64 {
    let p = f64::from(2 * k);
    match kind {
        Kind::Velocity => 2.0 / ((p + 1.0) * (p + 2.0)),
        Kind::Position => 2.0 / (3.0 * (p + 1.0)) - 1.0 / (p + 2.0) + 1.0 / (3.0 * (p + 4.0)),
    }
}

fn power(kind: Kind, k: u32) -> u32 {
    match kind {
        Kind::Velocity => 2 * k + 2,
        Kind::Position => 2 * k + 4,
    }
}

fn series_term(q: Quantity, k: u32, t: f64, z: f64) -> f64 {
    let kind = q.kind();
    let u = t * t / (4.0 * z * z);
    let lead = t.powi(power(kind, 0) as i32) / (16.0 * z.powi(4));
    lead * kernel_weight(q, k) * moment(kind, k) * u.powi(k as i32)
}

/// Taylor series of a dispersion about `t = 0`, keeping powers of `t` up to `order`.
pub fn small_t_series(q: Quantity, p: &EvalPoint, order: u32) -> Result<SeriesValue, DispersionError> {
    let (t, z) = (p.t, p.z());
    if t >= z {
        return Err(DispersionError::SeriesRange { t, z });
    }
    let kind = q.kind();
    let mut sum = 0.0;
    let mut k = 0;
    while power(kind, k) <= order {
        sum += series_term(q, k, t, z);
        k += 1;
    }
    // Term ratios are bounded by u·((k+2)/(k+1))^j for all later terms.
    let u = t * t / (4.0 * z * z);
    let growth = f64::from(k + 2) / f64::from(k + 1);
    let ratio = if q.is_normal() { u * growth } else { u * growth * growth };
    let bound = series_term(q, k, t, z) / (1.0 - ratio);
    let scale = p.particle.charge_sq() / (std::f64::consts::PI.powi(2) * p.particle.mass.powi(2));
    let kept = if k == 0 { 0 } else { power(kind, k - 1) };
    Ok(SeriesValue { value: scale * sum, truncation_bound: scale * bound, order: kept })
}

/// Series taken to the order where the tail bound drops below `10⁻¹⁸` relative.
pub fn small_t_series_converged(q: Quantity, p: &EvalPoint) -> Result<SeriesValue, DispersionError> {
    let kind = q.kind();
    let mut order = power(kind, 0);
    loop {
        let s = small_t_series(q, p, order)?;
        if s.truncation_bound <= 1e-18 * s.value.abs() || order > 200 {
            return Ok(s);
        }
        order += 2;
    }
}
