//! Direct scalar-wave simulation of the three-grating interferometer,
//! used to cross-check the closed-form visibility without absorption.
//!
//! Lengths are measured in grating periods and propagation distances in
//! Talbot lengths, so the Fresnel transfer function for a distance `L` is
//! `exp(-iπ (L/L_T) ν²)` with `ν` in cycles per period. An incoherent
//! source is emulated by summing intensities over tilted plane waves; a
//! tilt of `a · d/L` carries the transverse phase `2π a (L_T/L) x`.
//!
//! Nothing here calls into [`crate::physics`] or [`crate::specfun`].

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::exec::{self, pairwise_sum_buffers, Execution};

/// Spectral energy fraction allowed in the outer 5% of the band.
pub const ALIAS_LIMIT: f64 = 1e-3;
/// Relative energy change allowed across one free propagation.
pub const ENERGY_TOLERANCE: f64 = 1e-10;

const TAPER_FRACTION: f64 = 0.05;
const MIN_POINTS_PER_PERIOD: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    /// Transverse window width in grating periods.
    pub n_periods: usize,
    /// Samples across the window; a power of two.
    pub grid_points: usize,
    /// Number of source directions; odd so that the normal is included.
    pub n_angles: usize,
    /// Directions span `±angle_span · d/L`.
    pub angle_span: f64,
    pub execution: Execution,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            n_periods: 512,
            grid_points: 1 << 18,
            n_angles: 257,
            angle_span: 8.0,
            execution: Execution::default(),
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.grid_points.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid_points must be a power of two, got {}",
                self.grid_points
            )));
        }
        if self.n_angles.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "n_angles must be odd, got {}",
                self.n_angles
            )));
        }
        if self.n_periods < 4 || !self.grid_points.is_multiple_of(self.n_periods) {
            return Err(Error::Config(format!(
                "n_periods ({}) must be >= 4 and divide grid_points ({})",
                self.n_periods, self.grid_points
            )));
        }
        if self.points_per_period() < MIN_POINTS_PER_PERIOD {
            return Err(Error::Config(format!(
                "{} points per period; at least {MIN_POINTS_PER_PERIOD} are needed",
                self.points_per_period()
            )));
        }
        if !(self.angle_span >= 0.0 && self.angle_span.is_finite()) {
            return Err(Error::Config(format!(
                "angle_span must be >= 0, got {}",
                self.angle_span
            )));
        }
        Ok(())
    }

    pub fn points_per_period(&self) -> usize {
        self.grid_points / self.n_periods.max(1)
    }

    fn tilts(&self) -> Vec<f64> {
        if self.n_angles == 1 {
            return vec![0.0];
        }
        let n = self.n_angles - 1;
        (0..self.n_angles)
            .map(|j| self.angle_span * (2.0 * j as f64 / n as f64 - 1.0))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome {
    /// Signed visibility: projection of the fringe onto the G1-aligned
    /// cosine, so the sign carries the 0/π fringe phase.
    pub visibility: f64,
    /// Unsigned first-harmonic visibility.
    pub magnitude: f64,
    /// Fringe phase in periods, in `[0, 1)`.
    pub phase: f64,
    /// Largest relative energy change over any single propagation.
    pub max_energy_error: f64,
    /// Largest spectral energy fraction seen in the outer 5% of the band.
    pub alias_fraction: f64,
}

/// Fractional coverage of each pixel by a slit of width `f` centred on
/// every integer position (units of the period).
fn binary_mask(ppp: usize, f: f64) -> Vec<f64> {
    let dx = 1.0 / ppp as f64;
    (0..ppp)
        .map(|i| {
            let a = i as f64 * dx - 0.5 * dx;
            let b = a + dx;
            // open set is ∪_k [k - f/2, k + f/2]; a pixel overlaps at most k = 0, 1
            let overlap = |k: f64| (b.min(k + 0.5 * f) - a.max(k - 0.5 * f)).max(0.0);
            (overlap(0.0) + overlap(1.0)) / dx
        })
        .collect()
}

fn taper(i: usize, n: usize) -> f64 {
    let edge = (TAPER_FRACTION * n as f64).max(1.0);
    let dist = (i.min(n - 1 - i)) as f64;
    if dist >= edge {
        1.0
    } else {
        (0.5 * PI * dist / edge).sin().powi(2)
    }
}

fn energy(buf: &[Complex64]) -> f64 {
    buf.iter().map(|c| c.norm_sqr()).sum()
}

struct Propagator {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    transfer: Vec<Complex64>,
    edge_lo: usize,
    edge_hi: usize,
}

impl Propagator {
    fn new(n: usize, n_periods: usize, l_over_lt: f64) -> Self {
        let mut planner = FftPlanner::new();
        let transfer = (0..n)
            .map(|k| {
                let kk = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
                let nu = kk / n_periods as f64;
                Complex64::from_polar(1.0, -PI * l_over_lt * nu * nu)
            })
            .collect();
        let band = n / 2;
        let edge = (0.95 * band as f64) as usize;
        Propagator {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            transfer,
            edge_lo: edge,
            edge_hi: n - edge,
        }
    }

    /// Propagates in place; returns (relative energy error, alias fraction).
    fn apply(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) -> (f64, f64) {
        let before = energy(buf);
        self.forward.process_with_scratch(buf, scratch);
        let spectral = energy(buf);
        let outer: f64 = buf[self.edge_lo..=self.edge_hi]
            .iter()
            .map(|c| c.norm_sqr())
            .sum();
        for (c, h) in buf.iter_mut().zip(&self.transfer) {
            *c *= h;
        }
        self.inverse.process_with_scratch(buf, scratch);
        let scale = 1.0 / buf.len() as f64;
        for c in buf.iter_mut() {
            *c *= scale;
        }
        let after = energy(buf);
        ((after - before).abs() / before, outer / spectral)
    }
}

/// Applies one free propagation over `l_over_lt` to `field` (window of
/// `n_periods` periods) and returns the relative energy change.
pub fn propagate(field: &mut [Complex64], n_periods: usize, l_over_lt: f64) -> f64 {
    let prop = Propagator::new(field.len(), n_periods, l_over_lt);
    let mut scratch = vec![Complex64::default(); prop.forward.get_inplace_scratch_len()];
    prop.apply(field, &mut scratch).0
}

struct AngleResult {
    profile: Vec<f64>,
    energy_error: f64,
    alias: f64,
}

/// Full simulation with diagnostics.
pub fn oracle_run(f: f64, phi_max: f64, l_over_lt: f64, config: &OracleConfig) -> Result<OracleOutcome> {
    config.validate()?;
    if !(f > 0.0 && f < 1.0) {
        return Err(Error::domain(format!(
            "open fraction must lie in (0, 1), got {f}"
        )));
    }
    if !(l_over_lt > 0.0 && l_over_lt.is_finite() && phi_max.is_finite()) {
        return Err(Error::domain("need L/L_T > 0 and a finite phase"));
    }
    let n = config.grid_points;
    let ppp = config.points_per_period();
    let dx = 1.0 / ppp as f64;
    let slit = binary_mask(ppp, f);

    let g1: Vec<f64> = (0..n).map(|i| slit[i % ppp] * taper(i, n)).collect();
    let g2: Vec<Complex64> = (0..ppp)
        .map(|i| {
            let x = i as f64 * dx;
            Complex64::from_polar(1.0, phi_max * (PI * x).sin().powi(2))
        })
        .collect();
    let prop = Propagator::new(n, config.n_periods, l_over_lt);
    let scratch_len = prop.forward.get_inplace_scratch_len();
    let first = (config.n_periods / 4) * ppp;
    let last = first + (config.n_periods / 2) * ppp;
    let lt_over_l = 1.0 / l_over_lt;

    let per_angle = exec::map(config.execution, &config.tilts(), |&a| {
        let k = 2.0 * PI * a * lt_over_l;
        let mut buf: Vec<Complex64> = (0..n)
            .map(|i| Complex64::from_polar(g1[i], k * (i as f64 * dx)))
            .collect();
        let mut scratch = vec![Complex64::default(); scratch_len];
        let (e1, a1) = prop.apply(&mut buf, &mut scratch);
        for (i, c) in buf.iter_mut().enumerate() {
            *c *= g2[i % ppp];
        }
        let (e2, a2) = prop.apply(&mut buf, &mut scratch);
        let mut profile = vec![0.0; ppp];
        for (i, c) in buf[first..last].iter().enumerate() {
            profile[i % ppp] += c.norm_sqr();
        }
        AngleResult {
            profile,
            energy_error: e1.max(e2),
            alias: a1.max(a2),
        }
    });

    let max_energy_error = per_angle.iter().map(|r| r.energy_error).fold(0.0, f64::max);
    let alias_fraction = per_angle.iter().map(|r| r.alias).fold(0.0, f64::max);
    if alias_fraction > ALIAS_LIMIT {
        return Err(Error::NumericalQuality(format!(
            "{:.2e} of the spectral energy lies within 5% of the band edge; increase grid_points",
            alias_fraction
        )));
    }
    let profiles: Vec<Vec<f64>> = per_angle.into_iter().map(|r| r.profile).collect();
    let intensity = pairwise_sum_buffers(&profiles);

    // transmitted flux behind G3 for each shift of one pixel
    let flux: Vec<f64> = (0..ppp)
        .map(|s| {
            intensity
                .iter()
                .enumerate()
                .map(|(i, &v)| v * slit[(i + ppp - s) % ppp])
                .sum()
        })
        .collect();
    let total: f64 = flux.iter().sum();
    if !(total > 0.0) {
        return Err(Error::NumericalQuality("no flux reaches the detector".into()));
    }
    let (mut c, mut s) = (0.0, 0.0);
    for (m, &fl) in flux.iter().enumerate() {
        let th = 2.0 * PI * m as f64 / ppp as f64;
        c += fl * th.cos();
        s += fl * th.sin();
    }
    Ok(OracleOutcome {
        visibility: 2.0 * c / total,
        magnitude: 2.0 * c.hypot(s) / total,
        phase: (s.atan2(c) / (2.0 * PI)).rem_euclid(1.0),
        max_energy_error,
        alias_fraction,
    })
}

/// Signed fringe visibility from the wave simulation (no absorption).
pub fn oracle_visibility(f: f64, phi_max: f64, l_over_lt: f64, config: &OracleConfig) -> Result<f64> {
    oracle_run(f, phi_max, l_over_lt, config).map(|o| o.visibility)
}
