//! `vacbrown`: dispersions of a charged particle near a reflecting plane.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad arguments,
//! 3 lightcone window hit, 4 quadrature did not converge, 5 output not writable.

mod commands;
mod config;
mod output;
mod parse;
mod quantity;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "vacbrown", version, about = "Vacuum-fluctuation Brownian motion near a perfectly reflecting plane")]
pub struct Cli {
    /// TOML file with defaults for any long flag (`t_over_z = 3.0`, `z = "1um"`, ...).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Particle and evaluation point.
#[derive(Debug, Clone, Default, Args)]
pub struct PointArgs {
    /// `electron` (default) or `unit` (e = m = 1).
    #[arg(long)]
    pub particle: Option<String>,
    /// Dimensionless charge, overriding the preset.
    #[arg(long, allow_hyphen_values = true)]
    pub charge: Option<f64>,
    /// Mass in m^-1, or in kg with a `kg` suffix.
    #[arg(long)]
    pub mass: Option<String>,
    /// Distance from the plane (`1e-6m`, `1um`, `2Å`; bare numbers are metres).
    #[arg(long)]
    pub z: Option<String>,
    /// Elapsed time as a length (`1e-5m`) or in seconds (`3e-14s`).
    #[arg(long, conflicts_with = "t_over_z")]
    pub t: Option<String>,
    /// Elapsed time in units of z.
    #[arg(long)]
    pub t_over_z: Option<f64>,
    /// Half-width of the excluded band around t = 2z, in units of z.
    #[arg(long)]
    pub lightcone_window: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate quantities at one point and print a JSON record.
    Eval {
        #[command(flatten)]
        point: PointArgs,
        /// Quantities to report (comma separated or repeated).
        #[arg(long, value_delimiter = ',')]
        quantity: Vec<String>,
        /// Flag margin for the validity and radiation bounds.
        #[arg(long)]
        margin: Option<f64>,
        /// Also integrate the dispersions numerically.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        rel_tol: Option<f64>,
        #[arg(long)]
        max_subdivisions: Option<usize>,
    },
    /// Evaluate quantities over a range of t, z or t/z.
    Sweep {
        #[command(flatten)]
        point: PointArgs,
        /// Swept variable: `t`, `z` or `t-over-z`.
        #[arg(long)]
        var: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<String>,
        #[arg(long)]
        count: Option<usize>,
        /// `log` (default) or `lin`.
        #[arg(long)]
        spacing: Option<String>,
        #[arg(long, value_delimiter = ',')]
        quantity: Vec<String>,
        /// `csv` (default) or `json`.
        #[arg(long)]
        format: Option<String>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        margin: Option<f64>,
    },
    /// Compare every closed form against numerical quadrature on a t/z grid.
    Verify {
        /// `all` (default), `pre-lightcone` or `post-lightcone`.
        #[arg(long)]
        grid: Option<String>,
        /// Relative tolerance for every point instead of the 1e-6 / 1e-4 tiers.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        rel_tol: Option<f64>,
        #[arg(long)]
        max_subdivisions: Option<usize>,
    },
    /// Validity bounds, radiation estimate, packet ratios and temperature as JSON.
    Regimes {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        margin: Option<f64>,
    },
    /// Boundary field correlators at one time separation.
    Corr {
        #[arg(long)]
        z: Option<String>,
        /// Time separation as a length or in seconds.
        #[arg(long, allow_hyphen_values = true)]
        dt: Option<String>,
        /// Point-splitting regulator; gives the real part at Δt − iε.
        #[arg(long)]
        eps: Option<String>,
    },
    /// Physical constants and the electron in natural units.
    Constants,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
