//! Physical constants (CODATA 2018 exact/recommended values) and unit factors.

pub const PLANCK: f64 = 6.626_070_15e-34;
pub const HBAR: f64 = PLANCK / (2.0 * std::f64::consts::PI);
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

/// Standard atomic weight of carbon.
pub const CARBON_AMU: f64 = 12.011;

pub const ANGSTROM3: f64 = 1e-30;
pub const CM2: f64 = 1e-4;
pub const NM: f64 = 1e-9;
pub const UM: f64 = 1e-6;
pub const MM: f64 = 1e-3;
pub const MW: f64 = 1e-3;
