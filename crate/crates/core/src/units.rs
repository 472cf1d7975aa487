//! Physical constants, particle presets and the natural-unit ↔ SI boundary.
//!
//! Natural units here are Lorentz–Heaviside with `c = ħ = 1` and the metre as
//! the length unit. Consequently:
//!
//! | quantity | natural unit | SI factor |
//! |----------|--------------|-----------|
//! | length, time | m | time: `1 m = 1/c s` |
//! | mass, energy | m⁻¹ | energy: `1 m⁻¹ = ħc J` |
//! | velocity | 1 | `c` |

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitsError {
    #[error("{name} must be finite and positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("charge must be finite and non-zero, got {0}")]
    ZeroCharge(f64),
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64, UnitsError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(UnitsError::NonPositive { name, value })
    }
}

/// Table of the physical constants this crate needs (SI where dimensional).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    /// Fine-structure constant.
    pub fine_structure: f64,
    /// Boltzmann constant [J/K].
    pub boltzmann: f64,
    /// Reduced Planck constant [J s].
    pub hbar: f64,
    /// Speed of light [m/s].
    pub speed_of_light: f64,
    /// Electron mass [kg].
    pub electron_mass: f64,
}

/// CODATA 2018 recommended values.
pub const CODATA_2018: Constants = Constants {
    fine_structure: 7.297_352_569_3e-3,
    boltzmann: 1.380_649e-23,
    hbar: 1.054_571_817e-34,
    speed_of_light: 299_792_458.0,
    electron_mass: 9.109_383_701_5e-31,
};

impl Default for Constants {
    fn default() -> Self {
        CODATA_2018
    }
}

impl Constants {
    /// `ħc` [J m]: one natural energy unit (m⁻¹) in joules.
    pub fn hbar_c(&self) -> f64 {
        self.hbar * self.speed_of_light
    }

    /// Mass in kilograms to natural units (inverse reduced Compton wavelength, m⁻¹).
    pub fn mass_to_natural(&self, kg: f64) -> Result<f64, UnitsError> {
        let kg = require_positive("mass", kg)?;
        Ok(kg * self.speed_of_light / self.hbar)
    }

    pub fn mass_to_kg(&self, natural: f64) -> Result<f64, UnitsError> {
        let natural = require_positive("mass", natural)?;
        Ok(natural * self.hbar / self.speed_of_light)
    }

    /// Seconds to natural time (light-travel metres).
    pub fn seconds_to_natural(&self, s: f64) -> f64 {
        s * self.speed_of_light
    }

    pub fn natural_to_seconds(&self, t: f64) -> f64 {
        t / self.speed_of_light
    }

    /// Natural energy (m⁻¹) to kelvin via `E = k_B T`.
    pub fn energy_to_kelvin(&self, energy: f64) -> f64 {
        energy * self.hbar_c() / self.boltzmann
    }

    pub fn kelvin_to_energy(&self, kelvin: f64) -> f64 {
        kelvin * self.boltzmann / self.hbar_c()
    }

    /// Dimensionless squared velocity to m²/s².
    pub fn velocity_sq_to_si(&self, v2: f64) -> f64 {
        v2 * self.speed_of_light * self.speed_of_light
    }
}

/// Charge and mass of the test particle, in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParticleSpec {
    /// Dimensionless charge (`e² = 4πα` for the electron).
    pub charge: f64,
    /// Mass [m⁻¹].
    pub mass: f64,
}

impl ParticleSpec {
    pub fn new(charge: f64, mass: f64) -> Result<Self, UnitsError> {
        if !charge.is_finite() || charge == 0.0 {
            return Err(UnitsError::ZeroCharge(charge));
        }
        let mass = require_positive("mass", mass)?;
        Ok(Self { charge, mass })
    }

    /// The electron: `e = √(4πα)`, `m = m_e c/ħ` in m⁻¹.
    pub fn electron() -> Self {
        Self::electron_with(&CODATA_2018)
    }

    pub fn electron_with(constants: &Constants) -> Self {
        Self {
            charge: (4.0 * PI * constants.fine_structure).sqrt(),
            mass: constants.electron_mass * constants.speed_of_light / constants.hbar,
        }
    }

    /// `e = m = 1`, the reference particle for unit-free checks.
    pub fn unit() -> Self {
        Self { charge: 1.0, mass: 1.0 }
    }

    pub fn charge_sq(&self) -> f64 {
        self.charge * self.charge
    }

    /// The coupling `e²/4π`; equals α for the electron.
    pub fn alpha_equivalent(&self) -> f64 {
        self.charge_sq() / (4.0 * PI)
    }

    /// Common dispersion prefactor `e²/(π² m²)`.
    pub fn dispersion_prefactor(&self) -> f64 {
        self.charge_sq() / (PI * PI * self.mass * self.mass)
    }
}

impl Default for ParticleSpec {
    fn default() -> Self {
        Self::electron()
    }
}

/// Temperature in kelvin whose thermal energy `k_B T` equals `(α/π)/(m z²)`,
/// with `α = e²/4π` the particle coupling, `m` in m⁻¹ and `z` in metres.
pub fn natural_to_si_temperature(
    alpha: f64,
    mass: f64,
    z: f64,
    constants: &Constants,
) -> Result<f64, UnitsError> {
    let alpha = require_positive("coupling", alpha)?;
    let mass = require_positive("mass", mass)?;
    let z = require_positive("distance", z)?;
    Ok(constants.energy_to_kelvin(alpha / (PI * mass * z * z)))
}
