//! Polynomial extrapolation of a regulator ladder to `ε = 0`.
//!
//! The regularised value is modelled as a polynomial in `ε^p` through every
//! rung and evaluated at zero with Neville's scheme. Pointwise kernels are
//! even in `ε` (`p = 2`); integrals across the pole pick up odd powers from
//! the `iπδ`-type terms and need `p = 1`.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PowerModel {
    /// Polynomial in `ε²`.
    Even,
    /// Polynomial in `ε`.
    All,
}

impl PowerModel {
    fn abscissa(self, eps: f64) -> f64 {
        match self {
            PowerModel::Even => eps * eps,
            PowerModel::All => eps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtrapolationError {
    #[error("ladder needs at least 3 rungs, got {0}")]
    TooShort(usize),
    #[error("ε must be positive and strictly decreasing along the ladder")]
    NotDecreasing,
    #[error("extrapolation unreliable: successive corrections grow ({value:e} ± {error:e})")]
    Unreliable { value: f64, error: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extrapolated {
    pub value: f64,
    /// Size of the last Neville correction.
    pub error: f64,
}

/// Extrapolates `(ε, value)` pairs, ordered from largest to smallest `ε`.
pub fn extrapolate_ladder(points: &[(f64, f64)], model: PowerModel) -> Result<Extrapolated, ExtrapolationError> {
    extrapolate_ladder_with_noise(points, model, 0.0)
}

/// As [`extrapolate_ladder`], with each rung known only to within `noise`.
/// Growth of the corrections below the propagated noise level is tolerated.
pub fn extrapolate_ladder_with_noise(
    points: &[(f64, f64)],
    model: PowerModel,
    noise: f64,
) -> Result<Extrapolated, ExtrapolationError> {
    let n = points.len();
    if n < 3 {
        return Err(ExtrapolationError::TooShort(n));
    }
    if points.iter().any(|&(e, _)| !(e > 0.0)) || points.windows(2).any(|w| w[1].0 >= w[0].0) {
        return Err(ExtrapolationError::NotDecreasing);
    }

    let x: Vec<f64> = points.iter().map(|&(e, _)| model.abscissa(e)).collect();
    // row[i] holds P_{i..i+k}(0) after step k; estimates[k] = P_{0..k}(0).
    let mut row: Vec<f64> = points.iter().map(|&(_, v)| v).collect();
    let mut estimates = vec![row[0]];
    for k in 1..n {
        for i in 0..n - k {
            row[i] = (x[i] * row[i + 1] - x[i + k] * row[i]) / (x[i] - x[i + k]);
        }
        estimates.push(row[0]);
    }

    let value = estimates[n - 1];
    let corrections: Vec<f64> = estimates.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let error = corrections[corrections.len() - 1];

    let scale = points.iter().map(|&(_, v)| v.abs()).fold(0.0, f64::max);
    let floor = (1e3 * f64::EPSILON * scale).max(2.0 * lebesgue_at_zero(&x) * noise);
    if corrections.windows(2).any(|w| w[1] > w[0] + floor) {
        return Err(ExtrapolationError::Unreliable { value, error });
    }
    Ok(Extrapolated { value, error })
}

// Σ|L_i(0)| for the Lagrange basis on `x`.
fn lebesgue_at_zero(x: &[f64]) -> f64 {
    (0..x.len())
        .map(|i| {
            x.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &xj)| (xj / (xj - x[i])).abs())
                .product::<f64>()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladder(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        (0..6).map(|k| 1e-2 * 0.5f64.powi(k)).map(|e| (e, f(e))).collect()
    }

    #[test]
    fn constant_sequence() {
        let r = extrapolate_ladder(&ladder(|_| 3.25), PowerModel::Even).unwrap();
        assert_eq!(r.value, 3.25);
        assert_eq!(r.error, 0.0);
    }

    #[test]
    fn exact_quadratic_model() {
        let r = extrapolate_ladder(&ladder(|e| 1.5 + 40.0 * e * e), PowerModel::Even).unwrap();
        assert!((r.value - 1.5).abs() <= 4.0 * f64::EPSILON);
        let r = extrapolate_ladder(&ladder(|e| 1.5 + 40.0 * e * e), PowerModel::All).unwrap();
        assert!((r.value - 1.5).abs() < 1e-13);
    }

    #[test]
    fn odd_powers_need_full_model() {
        let f = |e: f64| 2.0 - 3.0 * e + 5.0 * e * e - 7.0 * e * e * e;
        let all = extrapolate_ladder(&ladder(f), PowerModel::All).unwrap();
        assert!((all.value - 2.0).abs() < 1e-13);
        // The even model leaves an O(ε) bias behind.
        let even = extrapolate_ladder(&ladder(f), PowerModel::Even).map(|r| r.value).unwrap_or_else(|e| match e {
            ExtrapolationError::Unreliable { value, .. } => value,
            other => panic!("{other:?}"),
        });
        assert!((even - 2.0).abs() > 1e-4);
    }

    #[test]
    fn rejects_malformed_ladders() {
        assert_eq!(extrapolate_ladder(&[(1.0, 1.0), (0.5, 1.0)], PowerModel::All), Err(ExtrapolationError::TooShort(2)));
        assert_eq!(
            extrapolate_ladder(&[(1.0, 1.0), (1.0, 1.0), (0.5, 1.0)], PowerModel::All),
            Err(ExtrapolationError::NotDecreasing)
        );
        assert_eq!(
            extrapolate_ladder(&[(1.0, 1.0), (0.5, 1.0), (-0.1, 1.0)], PowerModel::All),
            Err(ExtrapolationError::NotDecreasing)
        );
    }

    #[test]
    fn noise_tolerated_up_to_lebesgue_bound() {
        let jitter = [1.0, -1.0, 1.0, -1.0, 1.0, -1.0];
        let pts: Vec<(f64, f64)> =
            ladder(|e| 0.5 + e).into_iter().zip(jitter).map(|((e, v), j)| (e, v + 1e-12 * j)).collect();
        assert!(extrapolate_ladder(&pts, PowerModel::All).is_err());
        let r = extrapolate_ladder_with_noise(&pts, PowerModel::All, 1e-12).unwrap();
        assert!((r.value - 0.5).abs() < 1e-8);
    }

    #[test]
    fn divergent_ladder_flagged() {
        let pts: Vec<(f64, f64)> = ladder(|e| 1.0 / e);
        assert!(matches!(extrapolate_ladder(&pts, PowerModel::All), Err(ExtrapolationError::Unreliable { .. })));
    }
}
