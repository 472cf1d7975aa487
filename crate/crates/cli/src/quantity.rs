//! Everything `eval` and `sweep` can report, with units on both sides.

use std::fmt;
use std::str::FromStr;

use vacuum_brownian::dispersion::{asymptote, closed_form};
use vacuum_brownian::regimes::{
    effective_temperature, effective_thermal_energy, fluctuation_to_quantum_ratio, larmor_power,
    radiated_velocity_sq, radiation_time_limit, validity_time_limit,
};
use vacuum_brownian::{Component, Constants, DispersionError, EvalPoint, Kind, Quantity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    Dispersion(Quantity),
    Asymptote(Quantity),
    EffectiveTemperature,
    ValidityTimeLimit,
    RadiationTimeLimit,
    RadiatedVelocitySq,
    LarmorPower,
    RatioX,
    RatioZ,
}

pub const REGIME_OUTPUTS: [Output; 7] = [
    Output::EffectiveTemperature,
    Output::ValidityTimeLimit,
    Output::RadiationTimeLimit,
    Output::RadiatedVelocitySq,
    Output::LarmorPower,
    Output::RatioX,
    Output::RatioZ,
];

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Units {
    pub natural: &'static str,
    pub si: &'static str,
}

/// Outcome of one evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Ok { natural: f64, si: f64 },
    /// Inside the lightcone exclusion window.
    Singular(String),
    /// The formula is not defined at this point (e.g. a late-time asymptote before `2z`).
    OutOfRange(String),
}

impl Output {
    pub fn all() -> Vec<Output> {
        let mut v: Vec<Output> = Quantity::ALL.iter().map(|&q| Output::Dispersion(q)).collect();
        v.extend(Quantity::ALL.iter().map(|&q| Output::Asymptote(q)));
        v.extend(REGIME_OUTPUTS);
        v
    }

    /// Whether the value depends on `t`.
    pub fn needs_t(self) -> bool {
        !matches!(
            self,
            Output::EffectiveTemperature | Output::ValidityTimeLimit | Output::RadiationTimeLimit | Output::LarmorPower
        )
    }

    pub fn units(self) -> Units {
        let (natural, si) = match self {
            Output::Dispersion(q) | Output::Asymptote(q) => match q.kind() {
                Kind::Velocity => ("c^2", "m^2/s^2"),
                Kind::Position => ("m^2", "m^2"),
            },
            Output::EffectiveTemperature => ("m^-1", "K"),
            Output::ValidityTimeLimit | Output::RadiationTimeLimit => ("m", "s"),
            Output::RadiatedVelocitySq => ("c^2", "m^2/s^2"),
            Output::LarmorPower => ("m^-2", "W"),
            Output::RatioX | Output::RatioZ => ("1", "1"),
        };
        Units { natural, si }
    }

    fn to_si(self, v: f64, c: &Constants) -> f64 {
        match self {
            Output::Dispersion(q) | Output::Asymptote(q) => match q.kind() {
                Kind::Velocity => c.velocity_sq_to_si(v),
                Kind::Position => v,
            },
            Output::EffectiveTemperature => c.energy_to_kelvin(v),
            Output::ValidityTimeLimit | Output::RadiationTimeLimit => c.natural_to_seconds(v),
            Output::RadiatedVelocitySq => c.velocity_sq_to_si(v),
            Output::LarmorPower => v * c.hbar_c() * c.speed_of_light,
            Output::RatioX | Output::RatioZ => v,
        }
    }

    pub fn eval(self, p: &EvalPoint, c: &Constants) -> Value {
        let (particle, geometry, t) = (&p.particle, p.geometry, p.t);
        let natural = match self {
            Output::Dispersion(q) => match closed_form(q, p) {
                Ok(v) => v,
                Err(e @ DispersionError::Singular { .. }) => return Value::Singular(e.to_string()),
                Err(e) => return Value::OutOfRange(e.to_string()),
            },
            Output::Asymptote(q) => match asymptote(q, p) {
                Ok(v) => v,
                Err(e) => return Value::OutOfRange(e.to_string()),
            },
            Output::EffectiveTemperature => {
                // Both sides from the same formula, so the SI value is exact.
                let kelvin = effective_temperature(particle, geometry, c);
                return Value::Ok { natural: effective_thermal_energy(particle, geometry), si: kelvin };
            }
            Output::ValidityTimeLimit => validity_time_limit(particle, geometry),
            Output::RadiationTimeLimit => radiation_time_limit(particle, geometry),
            Output::RadiatedVelocitySq => radiated_velocity_sq(particle, geometry, t),
            Output::LarmorPower => larmor_power(particle, geometry),
            Output::RatioX | Output::RatioZ => {
                let component = if self == Output::RatioX { Component::X } else { Component::Z };
                match fluctuation_to_quantum_ratio(component, particle, geometry, t) {
                    Ok(v) => v,
                    Err(e) => return Value::OutOfRange(e.to_string()),
                }
            }
        };
        Value::Ok { natural, si: self.to_si(natural, c) }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Output::Dispersion(q) => write!(f, "{}", q.name()),
            Output::Asymptote(q) => write!(f, "{}_asym", q.name()),
            Output::EffectiveTemperature => f.write_str("effective_temperature"),
            Output::ValidityTimeLimit => f.write_str("validity_time_limit"),
            Output::RadiationTimeLimit => f.write_str("radiation_time_limit"),
            Output::RadiatedVelocitySq => f.write_str("radiated_velocity_sq"),
            Output::LarmorPower => f.write_str("larmor_power"),
            Output::RatioX => f.write_str("ratio_x"),
            Output::RatioZ => f.write_str("ratio_z"),
        }
    }
}

impl FromStr for Output {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Output::all().into_iter().find(|o| o.to_string() == s).ok_or_else(|| {
            let names: Vec<String> = Output::all().iter().map(Output::to_string).collect();
            format!("unknown quantity `{s}`; expected one of {}", names.join(", "))
        })
    }
}
