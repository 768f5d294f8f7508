//! `kdtl`: forward predictions, fits, fringe extraction, synthetic data and
//! wave-oracle checks for Kapitza-Dirac-Talbot-Lau interferometry.
//!
//! Exit codes: 0 success, 2 input or validation error, 3 numerical or
//! bracket failure, 4 internal error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "kdtl", version, about = "KDTL matter-wave interferometry toolkit")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Model or dataset TOML file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Noise seed
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Multiplier applied to every recorded power before modelling
    #[arg(long, global = true)]
    pub power_calibration: Option<f64>,
    /// Override the absorption cross section, cm²
    #[arg(long, global = true)]
    pub sigma_abs_cm2: Option<f64>,
    /// Replace the velocity distribution by a single velocity at its mode
    #[arg(long, global = true)]
    pub dv_zero: bool,
}

#[derive(Debug, Clone, Args)]
pub struct PowerGrid {
    /// Explicit comma-separated powers, W
    #[arg(long, value_delimiter = ',')]
    pub powers: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub p_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p_max: f64,
    #[arg(long, default_value_t = 50)]
    pub n_powers: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Budget {
    Quadrature,
    Linear,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Velocity-averaged visibility against laser power
    Predict {
        #[command(flatten)]
        grid: PowerGrid,
        /// Polarizability volume, Å³ (overrides the config)
        #[arg(long)]
        alpha_a3: Option<f64>,
        /// Add a monochromatic column at the most probable velocity
        #[arg(long)]
        mono: bool,
    },
    /// Fit the polarizability to one or more datasets
    Fit {
        datasets: Vec<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        alpha_min: f64,
        #[arg(long, default_value_t = 500.0)]
        alpha_max: f64,
        #[arg(long, default_value_t = 1e-3)]
        alpha_tol: f64,
        #[arg(long, value_enum, default_value_t = Budget::Quadrature)]
        budget: Budget,
        /// Relative σ_abs perturbation for the sensitivity entry
        #[arg(long, default_value_t = 0.5)]
        rel_change: f64,
        #[arg(long, default_value_t = 0.10)]
        power_uncertainty: f64,
        #[arg(long, default_value_t = 0.05)]
        waist_uncertainty: f64,
    },
    /// Visibility of a measured fringe scan
    Extract {
        /// Delimited `position_nm, counts` file
        scan: PathBuf,
        #[arg(long, default_value_t = 266.0)]
        period_nm: f64,
    },
    /// Seeded synthetic dataset from a model config
    Synth {
        #[command(flatten)]
        grid: PowerGrid,
        #[arg(long)]
        alpha_a3: Option<f64>,
        /// Standard deviation of the additive visibility noise
        #[arg(long, default_value_t = 0.01)]
        noise: f64,
    },
    /// Fitted polarizability under scaled absorption cross sections
    Sensitivity {
        datasets: Vec<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        rel_change: f64,
    },
    /// Compare the closed-form visibility with the wave simulation
    Oracle {
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,3")]
        phi: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,1.5,3.5,4.5")]
        l_over_lt: Vec<f64>,
        /// Open fraction (default: from --config, else 0.42)
        #[arg(long)]
        f: Option<f64>,
        #[arg(long, default_value_t = 512)]
        periods: usize,
        #[arg(long, default_value_t = 18)]
        grid_log2: u32,
        #[arg(long, default_value_t = 257)]
        angles: usize,
    },
}

/// A user error detected by the front end itself.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<kdtl_core::Error>() {
            return match e {
                _ if e.is_input_error() => 2,
                kdtl_core::Error::Bracket { .. }
                | kdtl_core::Error::Convergence(_)
                | kdtl_core::Error::NumericalQuality(_) => 3,
                _ => 4,
            };
        }
        if cause.is::<InputError>() || cause.is::<std::io::Error>() {
            return 2;
        }
    }
    4
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match std::panic::catch_unwind(|| commands::run(&cli.common, &cli.command)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
        Err(_) => ExitCode::from(4),
    }
}
