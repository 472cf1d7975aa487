//! Boundary-induced electric-field two-point functions for a perfectly
//! reflecting plate at `z = 0`, obtained by images.
//!
//! Only the plate-dependent part is evaluated; the free-space (Minkowski)
//! contribution is subtracted throughout and never computed. Both kernels
//! depend on the two times only through `Δt`, and only through `Δt²`.
//!
//! The kernels have a pole on the light cone of the image point,
//! `|Δt| = 2z`. The plain evaluators refuse to evaluate inside a small
//! exclusion window around it; the `_reg` variants shift `Δt → Δt − iε` and
//! return the real part, which is finite everywhere.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::units::{require_positive, UnitsError};

/// Default relative half-width of the refusal window: `|Δt² − 4z²| ≤ 10⁻⁹·4z²`.
pub const DEFAULT_EXCLUSION: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorrelatorError {
    #[error("Δt = {dt} lies on the image lightcone |Δt| = 2z (distance to pole {pole_distance:e})")]
    Singular { dt: f64, pole_distance: f64 },
    #[error("invalid regulator ladder: {0}")]
    InvalidLadder(String),
    #[error(transparent)]
    Domain(#[from] UnitsError),
}

/// Distance of the particle from the plate.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Geometry {
    z: f64,
}

impl Geometry {
    /// Points on (or behind) the plate are rejected.
    pub fn new(z: f64) -> Result<Self, UnitsError> {
        Ok(Self { z: require_positive("distance z", z)? })
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// Round-trip light travel time to the plate, `2z`.
    pub fn lightcone(&self) -> f64 {
        2.0 * self.z
    }
}

/// Point-splitting regulator: a strictly decreasing ladder of `ε` values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegulatorSpec {
    ladder: Vec<f64>,
}

impl RegulatorSpec {
    pub fn new(ladder: Vec<f64>) -> Result<Self, CorrelatorError> {
        if ladder.len() < 3 {
            return Err(CorrelatorError::InvalidLadder(format!("need at least 3 rungs, got {}", ladder.len())));
        }
        for &eps in &ladder {
            require_positive("regulator ε", eps)?;
        }
        if let Some(w) = ladder.windows(2).find(|w| w[1] >= w[0]) {
            return Err(CorrelatorError::InvalidLadder(format!("not strictly decreasing at {} -> {}", w[0], w[1])));
        }
        Ok(Self { ladder })
    }

    pub fn geometric(first: f64, ratio: f64, rungs: usize) -> Result<Self, CorrelatorError> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(CorrelatorError::InvalidLadder(format!("ratio must lie in (0, 1), got {ratio}")));
        }
        Self::new((0..rungs).map(|k| first * ratio.powi(k as i32)).collect())
    }

    /// `ε₀ = 10⁻²·z`, ratio 1/2, six rungs.
    pub fn default_for(geometry: Geometry) -> Self {
        Self::geometric(1e-2 * geometry.z(), 0.5, 6).expect("default ladder is valid")
    }

    pub fn ladder(&self) -> &[f64] {
        &self.ladder
    }

    /// Polynomial order of the ε → 0 extrapolation (one less than the rung count).
    pub fn order(&self) -> usize {
        self.ladder.len() - 1
    }
}

fn check_pole(dt: f64, z: f64, window: f64) -> Result<(), CorrelatorError> {
    let four_z2 = 4.0 * z * z;
    if (dt * dt - four_z2).abs() <= window * four_z2 {
        return Err(CorrelatorError::Singular { dt, pole_distance: (dt.abs() - 2.0 * z).abs() });
    }
    Ok(())
}

// (Δt − 2z)(Δt + 2z), factored so the small factor is formed by one subtraction.
#[inline]
fn lightcone_gap(dt: f64, z: f64) -> f64 {
    (dt - 2.0 * z) * (dt + 2.0 * z)
}

/// Unchecked transverse (xx = yy) kernel, `−(Δt² + 4z²)/(π²(Δt² − 4z²)³)`.
#[inline]
pub(crate) fn transverse_kernel(dt: f64, z: f64) -> f64 {
    let d = lightcone_gap(dt, z);
    -(dt * dt + 4.0 * z * z) / (PI * PI * d * d * d)
}

/// Unchecked normal (zz) kernel, `1/(π²(Δt² − 4z²)²)`.
#[inline]
pub(crate) fn normal_kernel(dt: f64, z: f64) -> f64 {
    let d = lightcone_gap(dt, z);
    1.0 / (PI * PI * d * d)
}

/// Transverse kernel continued to complex `Δt`.
#[inline]
pub(crate) fn transverse_kernel_c(w: Complex64, z: f64) -> Complex64 {
    let gap = (w - 2.0 * z) * (w + 2.0 * z);
    -(w * w + 4.0 * z * z) / (PI * PI * gap * gap * gap)
}

/// Normal kernel continued to complex `Δt`.
#[inline]
pub(crate) fn normal_kernel_c(w: Complex64, z: f64) -> Complex64 {
    let gap = (w - 2.0 * z) * (w + 2.0 * z);
    1.0 / (PI * PI * gap * gap)
}

/// Unchecked regularised transverse kernel at `Δt − iε` (real part).
#[inline]
pub(crate) fn transverse_kernel_reg(dt: f64, z: f64, eps: f64) -> f64 {
    transverse_kernel_c(Complex64::new(dt, -eps), z).re
}

/// Unchecked regularised normal kernel at `Δt − iε` (real part).
#[inline]
pub(crate) fn normal_kernel_reg(dt: f64, z: f64, eps: f64) -> f64 {
    normal_kernel_c(Complex64::new(dt, -eps), z).re
}

/// `⟨E_x E_x⟩_R = ⟨E_y E_y⟩_R` at time separation `dt`.
pub fn corr_transverse(dt: f64, geometry: Geometry) -> Result<f64, CorrelatorError> {
    corr_transverse_with(dt, geometry, DEFAULT_EXCLUSION)
}

pub fn corr_transverse_with(dt: f64, geometry: Geometry, window: f64) -> Result<f64, CorrelatorError> {
    check_pole(dt, geometry.z(), window)?;
    Ok(transverse_kernel(dt, geometry.z()))
}

/// `⟨E_z E_z⟩_R` at time separation `dt`.
pub fn corr_normal(dt: f64, geometry: Geometry) -> Result<f64, CorrelatorError> {
    corr_normal_with(dt, geometry, DEFAULT_EXCLUSION)
}

pub fn corr_normal_with(dt: f64, geometry: Geometry, window: f64) -> Result<f64, CorrelatorError> {
    check_pole(dt, geometry.z(), window)?;
    Ok(normal_kernel(dt, geometry.z()))
}

pub fn corr_transverse_reg(dt: f64, geometry: Geometry, eps: f64) -> Result<f64, CorrelatorError> {
    let eps = require_positive("regulator ε", eps)?;
    Ok(transverse_kernel_reg(dt, geometry.z(), eps))
}

pub fn corr_normal_reg(dt: f64, geometry: Geometry, eps: f64) -> Result<f64, CorrelatorError> {
    let eps = require_positive("regulator ε", eps)?;
    Ok(normal_kernel_reg(dt, geometry.z(), eps))
}

/// Coincidence value `⟨E²⟩_R = 3/(16π² z⁴)`.
pub fn mean_e_squared(geometry: Geometry) -> f64 {
    let z2 = geometry.z() * geometry.z();
    3.0 / (16.0 * PI * PI * z2 * z2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(z: f64) -> Geometry {
        Geometry::new(z).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn transverse_values() {
        let pi2 = PI * PI;
        assert!(rel(corr_transverse(0.0, g(1.0)).unwrap(), 1.0 / (16.0 * pi2)) < 1e-15);
        assert!(rel(corr_transverse(0.0, g(1.0)).unwrap(), 6.3326e-3) < 1e-4);
        assert!(rel(corr_transverse(1.0, g(1.0)).unwrap(), 5.0 / (27.0 * pi2)) < 1e-15);
        assert!(rel(corr_transverse(1.0, g(1.0)).unwrap(), 1.8762e-2) < 1e-4);
    }

    #[test]
    fn normal_values() {
        let pi2 = PI * PI;
        assert!(rel(corr_normal(0.0, g(1.0)).unwrap(), 1.0 / (16.0 * pi2)) < 1e-15);
        assert!(rel(corr_normal(1.0, g(1.0)).unwrap(), 1.0 / (9.0 * pi2)) < 1e-15);
        assert!(rel(corr_normal(1.0, g(1.0)).unwrap(), 1.1258e-2) < 1e-4);
    }

    #[test]
    fn far_from_plate_vanishes() {
        let mut last = f64::INFINITY;
        for z in [1e1, 1e2, 1e3, 1e4] {
            let v = corr_normal(1.0, g(z)).unwrap();
            assert!(v < last);
            last = v;
        }
        assert!(last < 1e-16);
    }

    #[test]
    fn refuses_on_pole() {
        let err = corr_transverse(2.0, g(1.0)).unwrap_err();
        assert!(matches!(err, CorrelatorError::Singular { pole_distance, .. } if pole_distance == 0.0));
        let err = corr_normal(-2.0 * (1.0 + 1e-11), g(1.0)).unwrap_err();
        match err {
            CorrelatorError::Singular { pole_distance, .. } => assert!(pole_distance < 1e-10 && pole_distance > 0.0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(corr_normal(2.0 * (1.0 + 1e-6), g(1.0)).is_ok());
        assert!(corr_normal_with(2.1, g(1.0), 0.2).is_err());
    }

    #[test]
    fn geometry_rejects_plate() {
        assert!(Geometry::new(0.0).is_err());
        assert!(Geometry::new(-1.0).is_err());
        assert!(Geometry::new(f64::INFINITY).is_err());
    }

    #[test]
    fn regularised_finite_on_pole() {
        for eps in [1e-1, 1e-3, 1e-6] {
            assert!(corr_transverse_reg(2.0, g(1.0), eps).unwrap().is_finite());
            assert!(corr_normal_reg(2.0, g(1.0), eps).unwrap().is_finite());
        }
        assert!(corr_normal_reg(1.0, g(1.0), 0.0).is_err());
        assert!(corr_normal_reg(1.0, g(1.0), -1e-3).is_err());
    }

    #[test]
    fn regularised_close_to_exact_at_small_eps() {
        let exact_t = corr_transverse(0.0, g(1.0)).unwrap();
        let exact_n = corr_normal(0.0, g(1.0)).unwrap();
        assert!(rel(corr_transverse_reg(0.0, g(1.0), 1e-3).unwrap(), exact_t) < 1e-4);
        assert!(rel(corr_normal_reg(0.0, g(1.0), 1e-3).unwrap(), exact_n) < 1e-4);
    }

    #[test]
    fn regularisation_error_is_quadratic() {
        // |reg(ε) − exact| / ε² should settle to a constant as ε shrinks.
        for dt in [0.0, 1.0, 3.0] {
            let exact = normal_kernel(dt, 1.0);
            let c1 = (normal_kernel_reg(dt, 1.0, 1e-2) - exact) / 1e-4;
            let c2 = (normal_kernel_reg(dt, 1.0, 5e-3) - exact) / 2.5e-5;
            assert!(rel(c2, c1) < 1e-3, "dt={dt}: {c1} vs {c2}");
        }
    }

    #[test]
    fn coincidence_identity() {
        for z in [0.5, 1.0, 3.0] {
            let lhs = 2.0 * corr_transverse(0.0, g(z)).unwrap() + corr_normal(0.0, g(z)).unwrap();
            assert!(rel(lhs, mean_e_squared(g(z))) < 1e-12);
        }
        assert!(rel(mean_e_squared(g(1.0)), 1.8998e-2) < 1e-4);
        assert!(rel(mean_e_squared(g(1.0)) / mean_e_squared(g(2.0)), 16.0) < 1e-14);
    }

    #[test]
    fn regulator_ladder_validation() {
        assert!(RegulatorSpec::new(vec![1e-2, 1e-3]).is_err());
        assert!(RegulatorSpec::new(vec![1e-2, 1e-2, 1e-3]).is_err());
        assert!(RegulatorSpec::new(vec![1e-2, 1e-3, -1e-4]).is_err());
        let d = RegulatorSpec::default_for(g(2.0));
        assert_eq!(d.ladder().len(), 6);
        assert_eq!(d.ladder()[0], 2e-2);
        assert_eq!(d.order(), 5);
    }

    proptest! {
        #[test]
        fn even_in_dt(dt in -10.0f64..10.0, z in 0.1f64..5.0) {
            prop_assume!((dt.abs() - 2.0 * z).abs() > 1e-3 * z);
            let geo = g(z);
            prop_assert_eq!(corr_transverse(dt, geo).unwrap(), corr_transverse(-dt, geo).unwrap());
            prop_assert_eq!(corr_normal(dt, geo).unwrap(), corr_normal(-dt, geo).unwrap());
            prop_assert_eq!(corr_normal_reg(dt, geo, 1e-2).unwrap(), corr_normal_reg(-dt, geo, 1e-2).unwrap());
        }

        #[test]
        fn stationary_in_time(t1 in 0.0f64..5.0, t2 in 0.0f64..5.0, shift in -50.0f64..50.0) {
            let dt = t1 - t2;
            prop_assume!((dt.abs() - 2.0).abs() > 1e-3);
            let shifted = (t1 + shift) - (t2 + shift);
            let a = corr_transverse(dt, g(1.0)).unwrap();
            let b = corr_transverse(shifted, g(1.0)).unwrap();
            prop_assert!(rel(b, a) < 1e-9);
        }
    }
}
