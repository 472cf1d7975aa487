//! Brownian motion of a charged test particle driven by electromagnetic vacuum
//! fluctuations near a perfectly reflecting plane.
//!
//! Everything is computed in Lorentz–Heaviside natural units (`c = ħ = 1`).
//! The natural length unit is the metre: distances and times are metres (a
//! time `t` is the light-travel distance `c·t`), masses are inverse metres
//! (`m c / ħ`), and the charge is dimensionless with `e² = 4πα` for the
//! electron. SI only appears at output boundaries (see [`units`]).
//!
//! Module map:
//!
//! * [`units`]: constants, particle presets, SI conversion.
//! * [`correlators`]: boundary-only electric-field two-point functions.
//! * [`dispersion`]: closed-form velocity/position dispersions, their
//!   late-time asymptotes and small-time series.
//! * [`oracle`]: independent quadrature of the defining time integrals.
//! * [`regimes`]: validity bounds, Larmor radiation, wave-packet comparison
//!   and effective temperature.

pub mod correlators;
pub mod dispersion;
pub mod oracle;
pub mod regimes;
pub mod units;

pub use correlators::{CorrelatorError, Geometry, RegulatorSpec};
pub use dispersion::{
    Component, DispersionError, DispersionResult, EvalPoint, Kind, Quantity, RegimeFlags,
};
pub use oracle::{OracleError, QuadratureSpec, ReductionMode};
pub use regimes::{PacketSpec, RegimeReport};
pub use units::{Constants, ParticleSpec, UnitsError, CODATA_2018};
