//! Longitudinal velocity distributions of the molecular beam and their
//! quadrature nodes.

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_128;

/// Lower cut of the Gaussian integration window, m/s.
pub const V_MIN_FLOOR: f64 = 1.0;
/// Half-width of the Gaussian integration window in standard deviations.
pub const WINDOW_SIGMAS: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub enum VelocityDistribution {
    /// Gaussian in v with mode `v_m` and standard deviation `delta_v`,
    /// truncated to v > 0 and renormalised. `delta_v = 0` is monochromatic.
    Gaussian { v_m: f64, delta_v: f64 },
    /// Measured `(v, weight)` samples, treated as a discrete distribution.
    Tabulated(Vec<(f64, f64)>),
}

impl VelocityDistribution {
    pub fn gaussian(v_m: f64, delta_v: f64) -> Result<Self> {
        let d = VelocityDistribution::Gaussian { v_m, delta_v };
        d.validate()?;
        Ok(d)
    }

    pub fn monochromatic(v: f64) -> Result<Self> {
        VelocityDistribution::gaussian(v, 0.0)
    }

    pub fn tabulated(table: Vec<(f64, f64)>) -> Result<Self> {
        let d = VelocityDistribution::Tabulated(table);
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            VelocityDistribution::Gaussian { v_m, delta_v } => {
                if !(*v_m > 0.0 && v_m.is_finite()) {
                    return Err(Error::Validation(format!(
                        "most probable velocity must be > 0, got {v_m}"
                    )));
                }
                if !(*delta_v >= 0.0 && delta_v.is_finite()) {
                    return Err(Error::Validation(format!(
                        "velocity spread must be >= 0, got {delta_v}"
                    )));
                }
            }
            VelocityDistribution::Tabulated(table) => {
                if table.is_empty() {
                    return Err(Error::Validation("velocity table is empty".into()));
                }
                let mut total = 0.0;
                for &(v, w) in table {
                    if !(v > 0.0 && v.is_finite()) {
                        return Err(Error::Validation(format!(
                            "tabulated velocity must be > 0, got {v}"
                        )));
                    }
                    if !(w >= 0.0 && w.is_finite()) {
                        return Err(Error::Validation(format!(
                            "tabulated weight must be >= 0, got {w}"
                        )));
                    }
                    total += w;
                }
                if !(total > 0.0) {
                    return Err(Error::Validation("velocity table weights sum to zero".into()));
                }
            }
        }
        Ok(())
    }

    /// Mode of the distribution (the heaviest entry for a table).
    pub fn most_probable(&self) -> f64 {
        match self {
            VelocityDistribution::Gaussian { v_m, .. } => *v_m,
            VelocityDistribution::Tabulated(t) => {
                t.iter()
                    .copied()
                    .fold((f64::NAN, f64::NEG_INFINITY), |best, (v, w)| {
                        if w > best.1 {
                            (v, w)
                        } else {
                            best
                        }
                    })
                    .0
            }
        }
    }

    /// Integration nodes `(v, weight)` with weights summing to one.
    pub fn nodes(&self) -> Result<Vec<(f64, f64)>> {
        self.validate().map_err(|e| Error::domain(e.to_string()))?;
        match self {
            VelocityDistribution::Gaussian { v_m, delta_v } => {
                if *delta_v == 0.0 {
                    return Ok(vec![(*v_m, 1.0)]);
                }
                let lo = (v_m - WINDOW_SIGMAS * delta_v).max(V_MIN_FLOOR);
                let hi = v_m + WINDOW_SIGMAS * delta_v;
                if !(hi > lo) {
                    return Err(Error::domain(format!("velocity window [{lo}, {hi}] is empty")));
                }
                let (x, w) = gauss_legendre_128();
                let half = 0.5 * (hi - lo);
                let mid = 0.5 * (hi + lo);
                let mut nodes: Vec<(f64, f64)> = x
                    .iter()
                    .zip(w)
                    .map(|(x, w)| {
                        let v = mid + half * x;
                        let z = (v - v_m) / delta_v;
                        (v, w * half * (-0.5 * z * z).exp())
                    })
                    .collect();
                normalise(&mut nodes)?;
                Ok(nodes)
            }
            VelocityDistribution::Tabulated(table) => {
                let mut nodes = table.clone();
                normalise(&mut nodes)?;
                Ok(nodes)
            }
        }
    }
}

fn normalise(nodes: &mut [(f64, f64)]) -> Result<()> {
    let total: f64 = nodes.iter().map(|n| n.1).sum();
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::domain("velocity distribution has no weight"));
    }
    for n in nodes.iter_mut() {
        n.1 /= total;
    }
    Ok(())
}
