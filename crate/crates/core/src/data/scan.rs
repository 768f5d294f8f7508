//! Fringe scans: molecule counts recorded while the third grating is stepped
//! across the interference pattern.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::constants::NM;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FringeScan {
    /// Grating shift, m.
    pub positions: Vec<f64>,
    pub counts: Vec<f64>,
    /// Expected fringe period, m.
    pub period_hint: f64,
}

impl FringeScan {
    pub fn new(positions: Vec<f64>, counts: Vec<f64>, period_hint: f64) -> Result<Self> {
        let scan = FringeScan {
            positions,
            counts,
            period_hint,
        };
        scan.validate()?;
        Ok(scan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.positions.len() != self.counts.len() {
            return Err(Error::Validation(format!(
                "{} positions but {} counts",
                self.positions.len(),
                self.counts.len()
            )));
        }
        if self.positions.len() < 8 {
            return Err(Error::Validation(format!(
                "a fringe scan needs at least 8 samples, got {}",
                self.positions.len()
            )));
        }
        let increasing = self.positions.windows(2).all(|w| w[1] > w[0]);
        let decreasing = self.positions.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(Error::Validation(
                "scan positions must be strictly monotone".into(),
            ));
        }
        if let Some(c) = self.counts.iter().find(|c| !(**c >= 0.0 && c.is_finite())) {
            return Err(Error::Validation(format!("counts must be >= 0, got {c}")));
        }
        if !(self.period_hint > 0.0 && self.period_hint.is_finite()) {
            return Err(Error::Validation(format!(
                "period must be > 0, got {}",
                self.period_hint
            )));
        }
        Ok(())
    }

    /// Width covered by the samples, counting half a step at each end.
    fn coverage(&self) -> f64 {
        let n = self.positions.len() as f64;
        let span = (self.positions[self.positions.len() - 1] - self.positions[0]).abs();
        span * n / (n - 1.0)
    }
}

/// One visibility estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub visibility: f64,
    /// Fringe maximum position modulo the period, m.
    pub phase: f64,
    /// Mean count level.
    pub mean: f64,
    pub sigma_v: f64,
}

/// Output of [`extract_visibility`]: the least-squares sinusoid estimate and
/// the `(S_max - S_min)/(S_max + S_min)` estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionRecord {
    pub fit: Estimate,
    pub max_min: Estimate,
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let inv = invert3(a)?;
    Some(std::array::from_fn(|i| (0..3).map(|j| inv[i][j] * b[j]).sum()))
}

fn invert3(m: [[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let c00 = cof(1, 2, 1, 2);
    let c01 = -cof(1, 2, 0, 2);
    let c02 = cof(1, 2, 0, 1);
    let det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
    if det.abs() < 1e-300 {
        return None;
    }
    let adj = [
        [c00, -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
        [c01, cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
        [c02, -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
    ];
    Some(adj.map(|row| row.map(|x| x / det)))
}

/// Fits `S(x) = S̄ (1 + V cos(2π(x - x₀)/d))` by linear least squares in
/// `(S̄, S̄V cos, S̄V sin)` and also reports the max/min estimator.
pub fn extract_visibility(scan: &FringeScan) -> Result<ExtractionRecord> {
    scan.validate()?;
    let d = scan.period_hint;
    if scan.coverage() < d * (1.0 - 1e-9) {
        return Err(Error::domain(format!(
            "scan covers {:.3e} m, less than one period ({d:.3e} m)",
            scan.coverage()
        )));
    }
    if scan.counts.iter().all(|&c| c <= 0.0) {
        return Err(Error::domain("degenerate signal: no positive counts"));
    }

    let n = scan.positions.len();
    let basis: Vec<[f64; 3]> = scan
        .positions
        .iter()
        .map(|&x| {
            let th = 2.0 * PI * x / d;
            [1.0, th.cos(), th.sin()]
        })
        .collect();
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for (row, &y) in basis.iter().zip(&scan.counts) {
        for i in 0..3 {
            atb[i] += row[i] * y;
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let cov_unit = invert3(ata).ok_or_else(|| Error::domain("scan positions do not resolve a sinusoid"))?;
    let [a, b, c] = solve3(ata, atb).ok_or_else(|| Error::domain("singular sinusoid fit"))?;
    if !(a > 0.0) {
        return Err(Error::domain("degenerate signal: fitted mean is not positive"));
    }
    let rss: f64 = basis
        .iter()
        .zip(&scan.counts)
        .map(|(r, &y)| (y - (a * r[0] + b * r[1] + c * r[2])).powi(2))
        .sum();
    let s2 = rss / (n as f64 - 3.0);
    let amp = b.hypot(c);
    let v = amp / a;

    // delta method on V = √(b²+c²)/a
    let grad = if amp > 0.0 {
        [-v / a, b / (a * amp), c / (a * amp)]
    } else {
        [0.0, 1.0 / a, 0.0]
    };
    let var_v: f64 = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| grad[i] * cov_unit[i][j] * grad[j])
        .sum::<f64>()
        * s2;
    let phase = (c.atan2(b) / (2.0 * PI) * d).rem_euclid(d);
    let phase = if d - phase < 1e-12 * d { 0.0 } else { phase };
    let fit = Estimate {
        visibility: v.clamp(0.0, 1.0),
        phase,
        mean: a,
        sigma_v: var_v.max(0.0).sqrt(),
    };

    let (imax, smax) = scan
        .counts
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::MIN), |acc, (i, c)| if c > acc.1 { (i, c) } else { acc });
    let smin = scan.counts.iter().copied().fold(f64::MAX, f64::min);
    let total = smax + smin;
    let s = s2.sqrt();
    let max_min = Estimate {
        visibility: ((smax - smin) / total).clamp(0.0, 1.0),
        phase: scan.positions[imax].rem_euclid(d),
        mean: 0.5 * total,
        sigma_v: 2.0 * s * smax.hypot(smin) / (total * total),
    };
    Ok(ExtractionRecord { fit, max_min })
}

/// Parses `position_nm, counts` rows. Separators may be commas, tabs,
/// semicolons or spaces; `#` lines and a leading header row are skipped.
pub fn parse_scan(text: &str, period: f64) -> Result<FringeScan> {
    let mut positions = Vec::new();
    let mut counts = Vec::new();
    let mut seen_data = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line
            .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let parsed: Option<Vec<f64>> = cols.iter().map(|s| s.parse().ok()).collect();
        match parsed {
            Some(v) if v.len() == 2 => {
                positions.push(v[0] * NM);
                counts.push(v[1]);
                seen_data = true;
            }
            None if !seen_data && positions.is_empty() => continue, // header
            _ => {
                return Err(Error::parse(
                    format!("line {}", lineno + 1),
                    format!("expected `position_nm, counts`, got `{line}`"),
                ))
            }
        }
    }
    FringeScan::new(positions, counts, period)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanNoise {
    None,
    Poisson,
}

/// Counts `S̄ (1 + V cos(2π(x - x₀)/d))` at the given positions, optionally
/// with Poisson noise from a seeded ChaCha8 stream.
pub fn synth_scan(
    positions: &[f64],
    mean: f64,
    visibility: f64,
    period: f64,
    phase: f64,
    noise: ScanNoise,
    seed: u64,
) -> Result<FringeScan> {
    if !(mean >= 0.0) || !(0.0..=1.0).contains(&visibility) {
        return Err(Error::domain("scan mean must be >= 0 and visibility in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts = positions
        .iter()
        .map(|&x| {
            let expected = mean * (1.0 + visibility * (2.0 * PI * (x - phase) / period).cos());
            match noise {
                ScanNoise::None => Ok(expected),
                ScanNoise::Poisson if expected > 0.0 => Poisson::new(expected)
                    .map(|p| p.sample(&mut rng))
                    .map_err(|e| Error::domain(e.to_string())),
                ScanNoise::Poisson => Ok(0.0),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    FringeScan::new(positions.to_vec(), counts, period)
}
