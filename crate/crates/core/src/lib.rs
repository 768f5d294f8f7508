//! Forward model and inference for Kapitza-Dirac-Talbot-Lau matter-wave
//! interferometry.
//!
//! The crate predicts fringe visibility as a function of laser power,
//! molecule, geometry and beam velocity distribution, fits the scalar optical
//! polarizability to measured visibility curves, and cross-checks the closed
//! form against a direct wave-propagation simulation.
//!
//! Loops over data points, quadrature nodes, Monte-Carlo trials and source
//! angles run on rayon when the default `parallel` feature is enabled; see
//! [`exec`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod data;
pub mod error;
pub mod exec;
pub mod fit;
pub mod minimize;
pub mod oracle;
pub mod physics;
pub mod quadrature;
pub mod specfun;
pub mod velocity;

pub use error::{Error, Result};
pub use exec::Execution;
pub use physics::{InterferometerGeometry, Molecule, PhaseAbsorptionState};
pub use velocity::VelocityDistribution;
