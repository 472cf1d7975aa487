//! Closed form against oracle on a fixed `t/z` grid.

use serde::Serialize;

use super::{position_oracle, velocity_oracle, OracleError, QuadratureSpec};
use crate::dispersion::{closed_form, DispersionError, EvalPoint, Kind, Quantity};

pub const PRE_LIGHTCONE: [f64; 5] = [0.1, 0.5, 1.0, 1.5, 1.9];
pub const POST_LIGHTCONE: [f64; 4] = [2.5, 3.0, 5.0, 10.0];
pub const PRE_TOLERANCE: f64 = 1e-6;
pub const POST_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grid {
    All,
    PreLightcone,
    PostLightcone,
}

impl Grid {
    pub fn points(self) -> Vec<f64> {
        match self {
            Grid::All => PRE_LIGHTCONE.iter().chain(POST_LIGHTCONE.iter()).copied().collect(),
            Grid::PreLightcone => PRE_LIGHTCONE.to_vec(),
            Grid::PostLightcone => POST_LIGHTCONE.to_vec(),
        }
    }
}

impl std::str::FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(Grid::All),
            "pre-lightcone" => Ok(Grid::PreLightcone),
            "post-lightcone" => Ok(Grid::PostLightcone),
            other => Err(format!("unknown grid `{other}` (expected all, pre-lightcone, post-lightcone)")),
        }
    }
}

/// Tolerance tier for a grid point.
pub fn default_tolerance(t_over_z: f64) -> f64 {
    if t_over_z < 2.0 {
        PRE_TOLERANCE
    } else {
        POST_TOLERANCE
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyRow {
    pub quantity: Quantity,
    pub t_over_z: f64,
    pub closed: f64,
    pub oracle: f64,
    pub rel_err: f64,
    pub eps_estimate: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Dispersion(#[from] DispersionError),
}

/// One comparison at `e = m = z = 1`. `tolerance` overrides the tier.
pub fn verify_point(
    quantity: Quantity,
    t_over_z: f64,
    tolerance: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<VerifyRow, VerifyError> {
    let p = EvalPoint::unit(t_over_z).map_err(DispersionError::from)?;
    let closed = closed_form(quantity, &p)?;
    let o = match quantity.kind() {
        Kind::Velocity => velocity_oracle(quantity.component(), &p, spec)?,
        Kind::Position => position_oracle(quantity.component(), &p, spec)?,
    };
    let rel_err = ((o.value - closed) / closed).abs();
    let tolerance = tolerance.unwrap_or_else(|| default_tolerance(t_over_z));
    Ok(VerifyRow {
        quantity,
        t_over_z,
        closed,
        oracle: o.value,
        rel_err,
        eps_estimate: o.eps_estimate,
        tolerance,
        pass: rel_err <= tolerance,
    })
}

/// Row order: grid point major, quantity minor.
pub fn grid_jobs(grid: Grid) -> Vec<(Quantity, f64)> {
    grid.points().into_iter().flat_map(|x| Quantity::ALL.into_iter().map(move |q| (q, x))).collect()
}
