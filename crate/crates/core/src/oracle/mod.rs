//! Independent quadrature of the defining time integrals.
//!
//! Velocity:  `⟨Δv_i²⟩ = (e²/m²) ∫₀ᵗ∫₀ᵗ C_ii(t′ − t″) dt′dt″`
//! Position:  `⟨Δx_i²⟩ = (e²/m²) ∫₀ᵗ∫₀ᵗ (t − t′)(t − t″) C_ii(t′ − t″) dt′dt″`
//!
//! Because the correlators are even functions of `Δt` only, both collapse to
//! one-dimensional integrals `∫₀ᵗ w(τ, t) C(τ) dτ` with
//! `w_v = 2(t − τ)` and `w_x = (2/3)(t³ − τ³) − τ(t² − τ²)`.
//! The double integrals are kept as an audit mode.
//!
//! For `t < 2z` the integrand is bounded and is integrated as is. For
//! `t > 2z` the range crosses the image pole at `τ = 2z`; the kernel is then
//! shifted to `τ − iε`, integrated for each rung of the regulator ladder and
//! extrapolated to `ε = 0`. The shifted integrand is analytic in `τ` apart
//! from the pole at `2z + iε`, so the stretch `[2z − d, 2z + d]` is taken
//! along the lower half circle of radius `d` instead of along the axis. That
//! is exact for every `ε` and removes the `1/ε³` cancellation on the axis.

pub mod extrapolate;
pub mod quadrature;
pub mod verify;

use std::cell::Cell;

use serde::Serialize;
use thiserror::Error;

use num_complex::Complex64;

use crate::correlators::{
    normal_kernel, normal_kernel_c, normal_kernel_reg, transverse_kernel, transverse_kernel_c, transverse_kernel_reg,
    CorrelatorError, RegulatorSpec,
};
use crate::dispersion::{Component, EvalPoint, Kind};
use extrapolate::{extrapolate_ladder_with_noise, ExtrapolationError, PowerModel};
use quadrature::{integrate, QuadratureError, Tolerance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadratureError),
    #[error("ε-extrapolation failed: {0}")]
    Extrapolation(#[from] ExtrapolationError),
    #[error("t = {t} is on the lightcone t = 2z = {lightcone}")]
    Lightcone { t: f64, lightcone: f64 },
    #[error("direct 2D reduction is only available before the lightcone (t < 2z), got t/z = {0}")]
    DirectAfterLightcone(f64),
    #[error("invalid quadrature spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Correlator(#[from] CorrelatorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionMode {
    Stationary1D,
    Direct2D,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Ladder for the post-lightcone regime; `None` uses [`RegulatorSpec::default_for`].
    pub regulator: Option<RegulatorSpec>,
    pub mode: ReductionMode,
    /// Use the regulator ladder even before the lightcone.
    pub always_regularize: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-300,
            rel_tol: 1e-12,
            max_subdivisions: 4000,
            regulator: None,
            mode: ReductionMode::Stationary1D,
            always_regularize: false,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), OracleError> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(OracleError::Spec(format!("tolerances must be positive ({}, {})", self.abs_tol, self.rel_tol)));
        }
        if self.max_subdivisions < 64 {
            return Err(OracleError::Spec(format!("max_subdivisions must be ≥ 64, got {}", self.max_subdivisions)));
        }
        Ok(())
    }

    pub fn with_mode(mut self, mode: ReductionMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    fn tolerance(&self) -> Tolerance {
        Tolerance { abs: self.abs_tol, rel: self.rel_tol, max_subdivisions: self.max_subdivisions }
    }
}

/// Weight of the stationary reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    Velocity,
    Position,
}

impl From<Kind> for Weight {
    fn from(kind: Kind) -> Self {
        match kind {
            Kind::Velocity => Weight::Velocity,
            Kind::Position => Weight::Position,
        }
    }
}

impl Weight {
    pub fn eval(self, tau: f64, t: f64) -> f64 {
        match self {
            Weight::Velocity => velocity_weight(tau, t),
            Weight::Position => position_weight(tau, t),
        }
    }

    fn eval_c(self, tau: Complex64, t: f64) -> Complex64 {
        match self {
            Weight::Velocity => 2.0 * (t - tau),
            Weight::Position => 2.0 / 3.0 * (t * t * t - tau * tau * tau) - tau * (t * t - tau * tau),
        }
    }

    // Integrand factor K(t′, t″) of the double integral.
    fn double(self, t1: f64, t2: f64, t: f64) -> f64 {
        match self {
            Weight::Velocity => 1.0,
            Weight::Position => (t - t1) * (t - t2),
        }
    }
}

/// `2(t − τ)`.
pub fn velocity_weight(tau: f64, t: f64) -> f64 {
    2.0 * (t - tau)
}

/// `(2/3)(t³ − τ³) − τ(t² − τ²)`.
pub fn position_weight(tau: f64, t: f64) -> f64 {
    2.0 / 3.0 * (t * t * t - tau * tau * tau) - tau * (t * t - tau * tau)
}

/// `∫₀ᵗ w(τ,t) g(τ) dτ` for an even kernel `g`; `breaks` are extra
/// breakpoints inside `(0, t)`.
pub fn reduced_integral<G: Fn(f64) -> f64>(
    g: G,
    weight: Weight,
    t: f64,
    breaks: &[f64],
    tol: Tolerance,
) -> Result<quadrature::Integral, QuadratureError> {
    let mut points = vec![0.0];
    points.extend(breaks.iter().copied().filter(|&b| b > 0.0 && b < t));
    points.push(t);
    integrate(|tau| weight.eval(tau, t) * g(tau), &points, tol)
}

/// `∫₀ᵗ∫₀ᵗ K(t′,t″) g(|t′ − t″|) dt′dt″` by nested adaptive quadrature, with
/// the inner integral split on the diagonal.
pub fn direct_integral<G: Fn(f64) -> f64>(
    g: G,
    weight: Weight,
    t: f64,
    tol: Tolerance,
) -> Result<quadrature::Integral, QuadratureError> {
    let inner_tol = Tolerance { rel: tol.rel * 1e-2, abs: tol.abs * 1e-2, ..tol };
    let failure: Cell<Option<QuadratureError>> = Cell::new(None);
    let outer = integrate(
        |t1| {
            let inner = integrate(|t2| weight.double(t1, t2, t) * g((t1 - t2).abs()), &[0.0, t1, t], inner_tol);
            match inner {
                Ok(r) => r.value,
                Err(e) => {
                    failure.set(Some(e));
                    0.0
                }
            }
        },
        &[0.0, t],
        tol,
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    outer
}

/// Oracle output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleValue {
    pub value: f64,
    /// Quadrature error estimate (absolute, scaled like `value`).
    pub quadrature_error: f64,
    /// Extrapolation error estimate when the regulator ladder was used.
    pub eps_estimate: Option<f64>,
}

fn kernel(component: Component) -> fn(f64, f64) -> f64 {
    if component.is_normal() {
        normal_kernel
    } else {
        transverse_kernel
    }
}

fn kernel_reg(component: Component) -> fn(f64, f64, f64) -> f64 {
    if component.is_normal() {
        normal_kernel_reg
    } else {
        transverse_kernel_reg
    }
}

fn kernel_c(component: Component) -> fn(Complex64, f64) -> Complex64 {
    if component.is_normal() {
        normal_kernel_c
    } else {
        transverse_kernel_c
    }
}

/// Integral across the pole at `a = 2z` for a single regulator value. The
/// stretch `[a − d, a + d]` runs along `τ = a + d·e^{iθ}`, `θ ∈ [π, 2π]`.
fn contour_integral(
    component: Component,
    weight: Weight,
    t: f64,
    z: f64,
    eps: f64,
    tol: Tolerance,
) -> Result<quadrature::Integral, QuadratureError> {
    let kc = kernel_c(component);
    let a = 2.0 * z;
    let d = a.min(t - a);
    let shift = Complex64::new(0.0, eps);
    let arc = |theta: f64| {
        let r = Complex64::from_polar(d, theta);
        let tau = a + r;
        (weight.eval_c(tau, t) * kc(tau - shift, z) * Complex64::i() * r).re
    };
    let near = integrate(arc, &[std::f64::consts::PI, 1.5 * std::f64::consts::PI, 2.0 * std::f64::consts::PI], tol)?;

    let k = kernel_reg(component);
    let f = |tau: f64| weight.eval(tau, t) * k(tau, z, eps);
    let far = if t - a > a {
        integrate(f, &[a + d, t], tol)?
    } else if a - d > 0.0 {
        integrate(f, &[0.0, a - d], tol)?
    } else {
        quadrature::Integral::ZERO
    };
    Ok(quadrature::Integral {
        value: near.value + far.value,
        error: near.error + far.error,
        subdivisions: near.subdivisions + far.subdivisions,
        roundoff_limited: near.roundoff_limited || far.roundoff_limited,
    })
}

fn ladder_integral(
    component: Component,
    weight: Weight,
    p: &EvalPoint,
    q: &QuadratureSpec,
) -> Result<OracleValue, OracleError> {
    let (t, z) = (p.t, p.z());
    let regulator = q.regulator.clone().unwrap_or_else(|| RegulatorSpec::default_for(p.geometry));
    let tol = q.tolerance();
    let mut rungs = Vec::with_capacity(regulator.ladder().len());
    let mut quad_err: f64 = 0.0;
    for &eps in regulator.ladder() {
        let r = if t > 2.0 * z {
            contour_integral(component, weight, t, z, eps, tol)?
        } else {
            let k = kernel_reg(component);
            reduced_integral(|tau| k(tau, z, eps), weight, t, &[], tol)?
        };
        quad_err = quad_err.max(r.error);
        rungs.push((eps, r.value));
    }
    let x = extrapolate_ladder_with_noise(&rungs, PowerModel::All, quad_err)?;
    let scale = prefactor(p);
    Ok(OracleValue { value: scale * x.value, quadrature_error: scale * quad_err, eps_estimate: Some(scale * x.error) })
}

fn prefactor(p: &EvalPoint) -> f64 {
    p.particle.charge_sq() / (p.particle.mass * p.particle.mass)
}

fn oracle(component: Component, kind: Kind, p: &EvalPoint, q: &QuadratureSpec) -> Result<OracleValue, OracleError> {
    q.validate()?;
    let (t, z) = (p.t, p.z());
    if p.near_lightcone() {
        return Err(OracleError::Lightcone { t, lightcone: 2.0 * z });
    }
    let weight = Weight::from(kind);
    let before = t < 2.0 * z;

    match q.mode {
        ReductionMode::Direct2D => {
            if !before {
                return Err(OracleError::DirectAfterLightcone(t / z));
            }
            let k = kernel(component);
            let r = direct_integral(|dt| k(dt, z), weight, t, q.tolerance())?;
            Ok(OracleValue { value: prefactor(p) * r.value, quadrature_error: prefactor(p) * r.error, eps_estimate: None })
        }
        ReductionMode::Stationary1D if before && !q.always_regularize => {
            let k = kernel(component);
            let r = reduced_integral(|tau| k(tau, z), weight, t, &[], q.tolerance())?;
            Ok(OracleValue { value: prefactor(p) * r.value, quadrature_error: prefactor(p) * r.error, eps_estimate: None })
        }
        ReductionMode::Stationary1D => ladder_integral(component, weight, p, q),
    }
}

/// Quadrature of `⟨Δv_i²⟩`.
pub fn velocity_oracle(component: Component, p: &EvalPoint, q: &QuadratureSpec) -> Result<OracleValue, OracleError> {
    oracle(component, Kind::Velocity, p, q)
}

/// Quadrature of `⟨Δx_i²⟩`.
pub fn position_oracle(component: Component, p: &EvalPoint, q: &QuadratureSpec) -> Result<OracleValue, OracleError> {
    oracle(component, Kind::Position, p, q)
}
