//! Validity bounds and physical interpretation of the dispersions.
//!
//! The "much less than" conditions are returned as hard numbers; flags use
//! a margin factor, [`DEFAULT_MARGIN`], so `ok` means `t ≤ 0.1·bound`.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;
use thiserror::Error;

use crate::correlators::{mean_e_squared, Geometry};
use crate::dispersion::{self, Component, DispersionError, EvalPoint, Kind, Quantity};
use crate::units::{natural_to_si_temperature, require_positive, Constants, ParticleSpec, UnitsError};

pub const DEFAULT_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegimeError {
    #[error("the x-direction ratio needs t > 2z (ln(t/2z) > 0); got t = {t}, z = {z}")]
    BeforeLightcone { t: f64, z: f64 },
    #[error("wave packet violates Δz·Δp ≥ 1/2: {width} · {momentum_width} = {product}")]
    Uncertainty { width: f64, momentum_width: f64, product: f64 },
    #[error(transparent)]
    Dispersion(#[from] DispersionError),
    #[error(transparent)]
    Domain(#[from] UnitsError),
}

/// Largest `t` for which the particle stays put: `⟨Δz²⟩ ≪ z²` ⇔ `t ≪ (2√2π/e)(mz)z`.
pub fn validity_time_limit(particle: &ParticleSpec, geometry: Geometry) -> f64 {
    let z = geometry.z();
    2.0 * SQRT_2 * PI / particle.charge.abs() * particle.mass * z * z
}

/// Larmor power `P = (e⁴/6πm²)⟨E²⟩` from the coincidence field strength.
pub fn larmor_power(particle: &ParticleSpec, geometry: Geometry) -> f64 {
    let e2 = particle.charge_sq();
    e2 * e2 / (6.0 * PI * particle.mass * particle.mass) * mean_e_squared(geometry)
}

/// Squared-velocity change from radiating for a time `t`: `e⁴t/(16π³z⁴m³)`.
pub fn radiated_velocity_sq(particle: &ParticleSpec, geometry: Geometry, t: f64) -> f64 {
    let e2 = particle.charge_sq();
    let z = geometry.z();
    e2 * e2 * t / (16.0 * PI.powi(3) * z.powi(4) * particle.mass.powi(3))
}

/// Radiation stays negligible while `t ≪ (4π/e²)(mz)z`.
pub fn radiation_time_limit(particle: &ParticleSpec, geometry: Geometry) -> f64 {
    let z = geometry.z();
    4.0 * PI / particle.charge_sq() * particle.mass * z * z
}

/// Gaussian wave packet: position width and momentum width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PacketSpec {
    width: f64,
    momentum_width: f64,
}

impl PacketSpec {
    pub fn new(width: f64, momentum_width: f64) -> Result<Self, RegimeError> {
        require_positive("packet width", width)?;
        require_positive("momentum width", momentum_width)?;
        let product = width * momentum_width;
        // A few ulps of slack so the minimum-uncertainty constructor always passes.
        if product < 0.5 * (1.0 - 4.0 * f64::EPSILON) {
            return Err(RegimeError::Uncertainty { width, momentum_width, product });
        }
        Ok(Self { width, momentum_width })
    }

    /// `Δp = 1/(2Δz)`.
    pub fn minimum_uncertainty(width: f64) -> Result<Self, RegimeError> {
        require_positive("packet width", width)?;
        Self::new(width, 0.5 / width)
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn momentum_width(&self) -> f64 {
        self.momentum_width
    }
}

/// Free spreading `√(Δz₀² + Δp²t²/m²)`.
pub fn packet_width(packet: &PacketSpec, mass: f64, t: f64) -> f64 {
    let spread = packet.momentum_width * t / mass;
    (packet.width * packet.width + spread * spread).sqrt()
}

/// Initial width minimising the width at time `t`: `√(t/2m)`.
pub fn optimal_initial_width(mass: f64, t: f64) -> f64 {
    (t / (2.0 * mass)).sqrt()
}

/// Smallest achievable packet width at time `t`, `√(t/m)`.
pub fn minimal_packet_width(mass: f64, t: f64) -> f64 {
    (t / mass).sqrt()
}

/// Late-time ratio of the fluctuation-induced position spread to the
/// minimal quantum spread.
///
/// * `x`/`y`: `2√(α ln(t/2z)/(3πtm))`, defined only for `t > 2z`;
/// * `z`: `√(α/2π)·√(t/m)/z`.
///
/// `α` is the particle coupling `e²/4π`.
pub fn fluctuation_to_quantum_ratio(
    component: Component,
    particle: &ParticleSpec,
    geometry: Geometry,
    t: f64,
) -> Result<f64, RegimeError> {
    let t = require_positive("time t", t)?;
    let z = geometry.z();
    let alpha = particle.alpha_equivalent();
    let m = particle.mass;
    if component.is_normal() {
        Ok(normal_ratio_coefficient(particle) * (t / m).sqrt() / z)
    } else {
        if t <= 2.0 * z {
            return Err(RegimeError::BeforeLightcone { t, z });
        }
        Ok(2.0 * (alpha * (t / (2.0 * z)).ln() / (3.0 * PI * t * m)).sqrt())
    }
}

/// `√(α/2π)`, the coefficient of `Δz_qm/z` in the z-direction ratio.
pub fn normal_ratio_coefficient(particle: &ParticleSpec) -> f64 {
    (particle.alpha_equivalent() / (2.0 * PI)).sqrt()
}

/// The same ratio computed from the exact closed-form dispersion:
/// `√|⟨Δx_i²⟩| / √(t/m)`.
pub fn fluctuation_to_quantum_ratio_exact(
    component: Component,
    particle: &ParticleSpec,
    geometry: Geometry,
    t: f64,
) -> Result<f64, RegimeError> {
    let p = EvalPoint::new(t, geometry.z(), *particle)?;
    let d = dispersion::closed_form(Quantity::of(Kind::Position, component), &p)?;
    Ok(d.abs().sqrt() / minimal_packet_width(particle.mass, t))
}

/// Late-time thermal energy `k_B T_eff = m·e²/(4π²m²z²)` in natural units (m⁻¹).
pub fn effective_thermal_energy(particle: &ParticleSpec, geometry: Geometry) -> f64 {
    let z = geometry.z();
    particle.charge_sq() / (4.0 * PI * PI * particle.mass * z * z)
}

/// Effective temperature in kelvin, `(α/π)/(k_B m z²)` with `ħ, c` restored.
pub fn effective_temperature(particle: &ParticleSpec, geometry: Geometry, constants: &Constants) -> f64 {
    natural_to_si_temperature(particle.alpha_equivalent(), particle.mass, geometry.z(), constants)
        .expect("particle and geometry are validated on construction")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub t: f64,
    pub z: f64,
    pub margin: f64,
    pub t_validity: f64,
    pub t_radiation: f64,
    pub radiated_velocity_sq: f64,
    pub larmor_power: f64,
    pub effective_temperature_k: f64,
    /// `Δx_f/Δx_qm` from the late-time formula; `None` for `t ≤ 2z`.
    pub ratio_x: Option<f64>,
    pub ratio_x_exact: Option<f64>,
    pub ratio_z: f64,
    pub ratio_z_exact: Option<f64>,
    pub validity_ok: bool,
    pub radiation_ok: bool,
}

impl RegimeReport {
    pub fn new(particle: &ParticleSpec, geometry: Geometry, t: f64, constants: &Constants) -> Result<Self, RegimeError> {
        Self::with_margin(particle, geometry, t, constants, DEFAULT_MARGIN)
    }

    /// As [`RegimeReport::new`] with the flags judged at `t ≤ margin·bound`.
    pub fn with_margin(
        particle: &ParticleSpec,
        geometry: Geometry,
        t: f64,
        constants: &Constants,
        margin: f64,
    ) -> Result<Self, RegimeError> {
        let t = require_positive("time t", t)?;
        let margin = require_positive("margin", margin)?;
        let t_validity = validity_time_limit(particle, geometry);
        let t_radiation = radiation_time_limit(particle, geometry);
        let exact = |c| fluctuation_to_quantum_ratio_exact(c, particle, geometry, t).ok();
        Ok(Self {
            t,
            z: geometry.z(),
            margin,
            t_validity,
            t_radiation,
            radiated_velocity_sq: radiated_velocity_sq(particle, geometry, t),
            larmor_power: larmor_power(particle, geometry),
            effective_temperature_k: effective_temperature(particle, geometry, constants),
            ratio_x: fluctuation_to_quantum_ratio(Component::X, particle, geometry, t).ok(),
            ratio_x_exact: exact(Component::X),
            ratio_z: fluctuation_to_quantum_ratio(Component::Z, particle, geometry, t)?,
            ratio_z_exact: exact(Component::Z),
            validity_ok: t <= margin * t_validity,
            radiation_ok: t <= margin * t_radiation,
        })
    }
}
