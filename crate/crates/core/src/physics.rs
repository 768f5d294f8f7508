//! Closed-form KDTL quantities: matter-wave scales, standing-wave phase and
//! absorption, and the monochromatic and velocity-averaged fringe visibility.
//!
//! Everything is SI internally. The polarizability is carried as a
//! polarizability volume (m³), which makes the phase and photon-number
//! expressions dimensionless as written.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::*;
use crate::error::{Error, Result};
use crate::specfun::{h_over_u, sinc_pi};
use crate::velocity::VelocityDistribution;

/// Global maximum of `J_2` on the real line.
pub const J2_MAX: f64 = 0.486_51;

/// Relative tolerance for the standing-wave period matching the grating period.
const PERIOD_MATCH_TOL: f64 = 1e-6;

fn check_speed(v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("velocity must be positive, got {v} m/s")))
    }
}

fn check_power(p: f64) -> Result<()> {
    if p >= 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("laser power must be >= 0, got {p} W")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Molecule {
    pub name: String,
    /// kg
    pub mass: f64,
    /// Scalar optical polarizability volume, m³.
    pub alpha_vol: f64,
    /// Absorption cross section at the laser wavelength, m².
    pub sigma_abs: f64,
}

impl Molecule {
    pub fn new(name: impl Into<String>, mass: f64, alpha_vol: f64, sigma_abs: f64) -> Result<Self> {
        let m = Molecule {
            name: name.into(),
            mass,
            alpha_vol,
            sigma_abs,
        };
        m.validate()?;
        Ok(m)
    }

    /// Builds a molecule from amu, Å³ and cm².
    pub fn from_lab_units(
        name: impl Into<String>,
        mass_amu: f64,
        alpha_a3: f64,
        sigma_abs_cm2: f64,
    ) -> Result<Self> {
        Molecule::new(
            name,
            mass_amu * ATOMIC_MASS_UNIT,
            alpha_a3 * ANGSTROM3,
            sigma_abs_cm2 * CM2,
        )
    }

    /// A pure-carbon fullerene `C_n`.
    pub fn fullerene(carbon_atoms: u32, alpha_a3: f64, sigma_abs_cm2: f64) -> Result<Self> {
        Molecule::from_lab_units(
            format!("C{carbon_atoms}"),
            f64::from(carbon_atoms) * CARBON_AMU,
            alpha_a3,
            sigma_abs_cm2,
        )
    }

    /// C70 with α = 117 Å³ and σ_abs(532 nm) = 2.1e-17 cm².
    pub fn c70() -> Self {
        Molecule::fullerene(70, 117.0, 2.1e-17).expect("valid constants")
    }

    /// C60 with α = 91 Å³ and σ_abs(532 nm) = 3.2e-18 cm².
    pub fn c60() -> Self {
        Molecule::fullerene(60, 91.0, 3.2e-18).expect("valid constants")
    }

    pub fn alpha_a3(&self) -> f64 {
        self.alpha_vol / ANGSTROM3
    }

    pub fn with_alpha_a3(&self, alpha_a3: f64) -> Self {
        Molecule {
            alpha_vol: alpha_a3 * ANGSTROM3,
            ..self.clone()
        }
    }

    pub fn with_sigma_abs(&self, sigma_abs: f64) -> Self {
        Molecule {
            sigma_abs,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::Validation(format!(
                "molecule mass must be > 0, got {}",
                self.mass
            )));
        }
        if !(self.alpha_vol >= 0.0 && self.alpha_vol.is_finite()) {
            return Err(Error::Validation(format!(
                "polarizability must be >= 0, got {} m³",
                self.alpha_vol
            )));
        }
        if !(self.sigma_abs >= 0.0 && self.sigma_abs.is_finite()) {
            return Err(Error::Validation(format!(
                "absorption cross section must be >= 0, got {} m²",
                self.sigma_abs
            )));
        }
        Ok(())
    }
}

/// Three-grating KDTL geometry. `l` is the distance G1→G2, equal to G2→G3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferometerGeometry {
    pub d: f64,
    pub f: f64,
    pub l: f64,
    pub lambda_l: f64,
    pub w_y: f64,
    /// Horizontal waist; cancels from the phase and absorption formulas.
    pub w_x: f64,
}

impl InterferometerGeometry {
    pub fn new(d: f64, f: f64, l: f64, lambda_l: f64, w_y: f64, w_x: f64) -> Result<Self> {
        let g = InterferometerGeometry {
            d,
            f,
            l,
            lambda_l,
            w_y,
            w_x,
        };
        g.validate()?;
        Ok(g)
    }

    /// d = 266 nm, f = 0.42, L = 105 mm, λ_L = 532 nm, w_y = 900 µm, w_x = 20 µm.
    pub fn kdtl_532() -> Self {
        InterferometerGeometry::new(266.0 * NM, 0.42, 105.0 * MM, 532.0 * NM, 900.0 * UM, 20.0 * UM)
            .expect("valid constants")
    }

    pub fn validate(&self) -> Result<()> {
        let fin = |x: f64| x.is_finite();
        if !(self.d > 0.0 && fin(self.d)) {
            return Err(Error::Validation(format!(
                "grating period must be > 0, got {}",
                self.d
            )));
        }
        if !(self.f > 0.0 && self.f < 1.0) {
            return Err(Error::Validation(format!(
                "open fraction must lie in (0, 1), got {}",
                self.f
            )));
        }
        if !(self.l > 0.0 && fin(self.l)) {
            return Err(Error::Validation(format!(
                "grating separation must be > 0, got {}",
                self.l
            )));
        }
        if !(self.w_y > 0.0 && fin(self.w_y)) {
            return Err(Error::Validation(format!(
                "vertical waist must be > 0, got {}",
                self.w_y
            )));
        }
        if !(self.w_x >= 0.0 && fin(self.w_x)) {
            return Err(Error::Validation(format!(
                "horizontal waist must be >= 0, got {}",
                self.w_x
            )));
        }
        if !((self.lambda_l - 2.0 * self.d).abs() <= PERIOD_MATCH_TOL * 2.0 * self.d) {
            return Err(Error::Validation(format!(
                "standing-wave period λ_L/2 = {} m does not match grating period {} m",
                self.lambda_l / 2.0,
                self.d
            )));
        }
        Ok(())
    }

    /// L / L_T for a particle of the given mass and speed.
    pub fn l_over_talbot(&self, mass: f64, v: f64) -> Result<f64> {
        let lambda_db = de_broglie_wavelength(mass, v)?;
        Ok(self.l / talbot_length(self.d, lambda_db)?)
    }
}

/// Dimensionless parameters of one molecule–velocity–power configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseAbsorptionState {
    pub phi_max: f64,
    pub n0: f64,
    pub xi_coh: f64,
    pub xi_abs: f64,
    pub l_over_lt: f64,
}

impl PhaseAbsorptionState {
    pub fn new(molecule: &Molecule, geometry: &InterferometerGeometry, power: f64, v: f64) -> Result<Self> {
        let phi = phi_max(molecule, geometry, power, v)?;
        let n0 = mean_absorbed_photons(molecule, geometry, power, v)?;
        let l_over_lt = geometry.l_over_talbot(molecule.mass, v)?;
        Ok(PhaseAbsorptionState {
            phi_max: phi,
            n0,
            xi_coh: xi_coherent(phi, l_over_lt),
            xi_abs: xi_absorptive(n0, l_over_lt)?,
            l_over_lt,
        })
    }

    pub fn visibility(&self, f: f64) -> Result<f64> {
        visibility_mono(f, self.xi_coh, self.xi_abs)
    }
}

pub fn de_broglie_wavelength(mass: f64, v: f64) -> Result<f64> {
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::domain(format!("mass must be positive, got {mass} kg")));
    }
    check_speed(v)?;
    Ok(PLANCK / (mass * v))
}

pub fn talbot_length(d: f64, lambda_db: f64) -> Result<f64> {
    if !(d > 0.0 && lambda_db > 0.0) {
        return Err(Error::domain(format!(
            "talbot length needs positive period and wavelength, got d={d}, λ={lambda_db}"
        )));
    }
    Ok(d * d / lambda_db)
}

/// Grating separation of the `order`-th KDTL visibility maximum, `(2m+1)/2 · L_T`.
pub fn kdtl_resonant_length(order: u32, d: f64, lambda_db: f64) -> Result<f64> {
    Ok((2.0 * f64::from(order) + 1.0) / 2.0 * talbot_length(d, lambda_db)?)
}

/// Peak phase at a standing-wave antinode, `8√(2π) α P / (ħ c w_y v)`.
pub fn phi_max(molecule: &Molecule, geometry: &InterferometerGeometry, power: f64, v: f64) -> Result<f64> {
    check_speed(v)?;
    check_power(power)?;
    Ok(8.0 * (2.0 * PI).sqrt() * molecule.alpha_vol * power / (HBAR * SPEED_OF_LIGHT * geometry.w_y * v))
}

/// Mean photon number absorbed at an antinode,
/// `8 σ λ_L P / (√(2π) h c w_y v)`.
pub fn mean_absorbed_photons(
    molecule: &Molecule,
    geometry: &InterferometerGeometry,
    power: f64,
    v: f64,
) -> Result<f64> {
    check_speed(v)?;
    check_power(power)?;
    Ok(8.0 * molecule.sigma_abs * geometry.lambda_l * power
        / ((2.0 * PI).sqrt() * PLANCK * SPEED_OF_LIGHT * geometry.w_y * v))
}

pub fn xi_coherent(phi_max: f64, l_over_lt: f64) -> f64 {
    phi_max * (PI * l_over_lt).sin()
}

pub fn xi_absorptive(n0: f64, l_over_lt: f64) -> Result<f64> {
    if !(n0 >= 0.0) {
        return Err(Error::domain(format!("photon number must be >= 0, got {n0}")));
    }
    Ok(n0 * (PI * l_over_lt / 2.0).sin().powi(2))
}

/// Phase imprinted by the standing wave at transverse position `x`.
pub fn transmission_phase(x: f64, phi_max: f64, lambda_l: f64) -> f64 {
    phi_max * (2.0 * PI * x / lambda_l).sin().powi(2)
}

/// Signed fringe visibility at a single velocity.
///
/// The closed form `2 sinc²(πf) e^{-ξa} (ξc-ξa)/(ξc+ξa) J_2(√(ξc²-ξa²))` is
/// evaluated as `2 sinc²(πf) e^{-ξa} (ξc-ξa)² · h(u)/u` with `u = ξc²-ξa²`,
/// where `h(u)/u` is entire. This removes the 0/0 at `ξc = -ξa`, covers the
/// `ξa > |ξc|` region through `I_2`, and gives 0 at the origin.
pub fn visibility_mono(f: f64, xi_coh: f64, xi_abs: f64) -> Result<f64> {
    if !(f > 0.0 && f < 1.0) {
        return Err(Error::domain(format!(
            "open fraction must lie in (0, 1), got {f}"
        )));
    }
    if !(xi_abs >= 0.0) {
        return Err(Error::domain(format!("ξ_abs must be >= 0, got {xi_abs}")));
    }
    if !xi_coh.is_finite() || !xi_abs.is_finite() {
        return Err(Error::domain("ξ parameters must be finite"));
    }
    let s = sinc_pi(PI * f);
    let diff = xi_coh - xi_abs;
    let u = diff * (xi_coh + xi_abs);
    Ok(2.0 * s * s * (-xi_abs).exp() * diff * diff * h_over_u(u))
}

/// Signed visibility of a monochromatic beam at speed `v`.
pub fn visibility_at_velocity(
    molecule: &Molecule,
    geometry: &InterferometerGeometry,
    power: f64,
    v: f64,
) -> Result<f64> {
    PhaseAbsorptionState::new(molecule, geometry, power, v)?.visibility(geometry.f)
}

/// Signed velocity average `∫ p(v) V(P, v) dv` before taking the modulus.
pub fn visibility_avg_signed(
    molecule: &Molecule,
    geometry: &InterferometerGeometry,
    dist: &VelocityDistribution,
    power: f64,
) -> Result<f64> {
    check_power(power)?;
    let nodes = dist.nodes()?;
    let mut acc = 0.0;
    for (v, w) in nodes {
        acc += w * visibility_at_velocity(molecule, geometry, power, v)?;
    }
    Ok(acc)
}

/// Velocity-averaged fringe visibility, `|∫ p(v) V(P, v) dv|`.
pub fn visibility_avg(
    molecule: &Molecule,
    geometry: &InterferometerGeometry,
    dist: &VelocityDistribution,
    power: f64,
) -> Result<f64> {
    visibility_avg_signed(molecule, geometry, dist, power).map(f64::abs)
}
