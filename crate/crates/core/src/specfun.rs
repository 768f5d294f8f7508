//! Integer-order Bessel functions and the related entire functions used by
//! the visibility model.
//!
//! Small arguments are summed from the ascending power series. Larger
//! arguments of `J_n` use Miller's backward recurrence normalised with
//! `J_0 + 2 Σ J_2k = 1`.

use crate::error::{Error, Result};

/// Above this |x| the alternating series for `J_n` loses too many digits.
const SERIES_CUTOFF: f64 = 12.0;
const MAX_J_ARG: f64 = 1e4;
const MAX_I_ARG: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    pub max_terms: usize,
    pub abs_tol: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        // I_2(50) needs ~80 terms before the tail drops below 1e-15 relative.
        SeriesConfig {
            max_terms: 120,
            abs_tol: 1e-15,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_terms < 8 {
            return Err(Error::Config(format!(
                "max_terms must be at least 8, got {}",
                self.max_terms
            )));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::Config(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        Ok(())
    }
}

/// Sums `Σ t_k` where `t_{k+1} = t_k * ratio(k)`, stopping once the terms
/// are shrinking and the next one is below tolerance relative to the sum.
fn sum_series(first: f64, ratio: impl Fn(usize) -> f64, cfg: &SeriesConfig) -> Result<f64> {
    cfg.validate()?;
    let mut term = first;
    let mut sum = first;
    for k in 0..cfg.max_terms {
        let r = ratio(k);
        term *= r;
        sum += term;
        if r.abs() < 1.0 && term.abs() <= cfg.abs_tol * sum.abs() {
            return Ok(sum);
        }
        if term == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::Convergence(format!(
        "power series not converged after {} terms",
        cfg.max_terms
    )))
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `J_n(x)` from the ascending power series.
pub fn bessel_j_series(n: u32, x: f64, cfg: &SeriesConfig) -> Result<f64> {
    let half = 0.5 * x;
    let first = half.powi(n as i32) / factorial(n);
    let q = half * half;
    let nf = f64::from(n);
    sum_series(
        first,
        |k| {
            let k = k as f64;
            -q / ((k + 1.0) * (k + 1.0 + nf))
        },
        cfg,
    )
}

/// `J_n(x)` by Miller's backward recurrence.
pub fn bessel_j_recurrence(n: u32, x: f64) -> f64 {
    let ax = x.abs();
    if ax == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let top = f64::from(n).max(ax);
    let mut start = (top + 30.0 + (60.0 * ax).sqrt()).ceil() as u32;
    start += start % 2;

    let mut next = 0.0_f64; // J_{k+1}
    let mut cur = 1e-300_f64; // J_k
    let mut norm = 0.0_f64;
    let mut wanted = 0.0_f64;
    for k in (1..=start).rev() {
        // J_{k-1} = (2k/x) J_k - J_{k+1}
        let prev = 2.0 * f64::from(k) / ax * cur - next;
        next = cur;
        cur = prev;
        let order = k - 1;
        if order == n {
            wanted = cur;
        }
        if order != 0 && order % 2 == 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
    }
    norm += cur;
    let value = wanted / norm;
    if x < 0.0 && n % 2 == 1 {
        -value
    } else {
        value
    }
}

/// Bessel function of the first kind, integer order.
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > MAX_J_ARG {
        return Err(Error::domain(format!(
            "bessel_j argument must satisfy |x| <= {MAX_J_ARG}, got {x}"
        )));
    }
    if x.abs() <= SERIES_CUTOFF {
        bessel_j_series(n, x, &SeriesConfig::default())
    } else {
        Ok(bessel_j_recurrence(n, x))
    }
}

/// Modified Bessel function of the first kind with a user series config.
pub fn bessel_i_with(n: u32, x: f64, cfg: &SeriesConfig) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("bessel_i needs x >= 0, got {x}")));
    }
    if x > MAX_I_ARG {
        return Err(Error::domain(format!(
            "bessel_i argument must be <= {MAX_I_ARG}, got {x}"
        )));
    }
    let half = 0.5 * x;
    let q = half * half;
    let nf = f64::from(n);
    sum_series(
        half.powi(n as i32) / factorial(n),
        |k| {
            let k = k as f64;
            q / ((k + 1.0) * (k + 1.0 + nf))
        },
        cfg,
    )
}

/// Modified Bessel function of the first kind, integer order, `0 <= x <= 50`.
pub fn bessel_i(n: u32, x: f64) -> Result<f64> {
    bessel_i_with(n, x, &SeriesConfig::default())
}

/// `h(u) / u`, continued to `1/8` at the origin. Entire in `u`.
pub fn h_over_u(u: f64) -> f64 {
    if u > SERIES_CUTOFF * SERIES_CUTOFF {
        return bessel_j_recurrence(2, u.sqrt()) / u;
    }
    let cfg = SeriesConfig {
        max_terms: 400,
        ..SeriesConfig::default()
    };
    // Σ (-1)^k u^k / (4^{k+1} k! (k+2)!)
    sum_series(
        0.125,
        |k| {
            let k = k as f64;
            -0.25 * u / ((k + 1.0) * (k + 3.0))
        },
        &cfg,
    )
    .unwrap_or(f64::NAN)
}

/// The entire function `h(u) = Σ (-1)^k u^{k+1} / (4^{k+1} k! (k+2)!)`.
///
/// `h(u) = J_2(√u)` for `u >= 0` and `h(u) = -I_2(√-u)` for `u < 0`.
pub fn h_entire(u: f64) -> f64 {
    u * h_over_u(u)
}

/// `sin(y) / y` with the removable singularity filled in.
pub fn sinc_pi(y: f64) -> f64 {
    if y.abs() < 1e-4 {
        let y2 = y * y;
        1.0 - y2 / 6.0 + y2 * y2 / 120.0
    } else {
        y.sin() / y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const J2_1: f64 = 0.114_903_484_931_900_5;
    const I2_1: f64 = 0.135_747_669_767_038_3;

    fn j2(x: f64) -> f64 {
        bessel_j(2, x).unwrap()
    }

    #[test]
    fn known_values() {
        assert_eq!(j2(0.0), 0.0);
        assert!((j2(1.0) - J2_1).abs() < 1e-13);
        assert!((bessel_i(2, 1.0).unwrap() - I2_1).abs() < 1e-13);
        assert_eq!(bessel_i(2, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn reference_table() {
        // scipy.special.jv / iv
        let cases = [
            (2, 30.0, 0.078_451_246_073_265_38),
            (2, 50.0, -0.059_712_800_794_258_82),
            (2, 100.0, -0.021_528_757_344_505_36),
            (5, 20.0, 0.151_169_767_982_394_93),
            (0, 7.5, 0.266_339_657_880_378_44),
            (1, 3.3, 0.220_663_452_985_241_12),
            (2, 1e4, 0.007_096_889_843_539_908),
            (2, -12.5, -0.173_361_463_438_782_64),
            (3, -4.0, -0.430_171_473_875_621_93),
        ];
        for (n, x, want) in cases {
            let got = bessel_j(n, x).unwrap();
            assert!((got - want).abs() < 1e-12, "J_{n}({x}) = {got}, want {want}");
        }
        let i_cases = [
            (2, 10.0, 2_281.518_967_726_004),
            (0, 2.0, 2.279_585_302_336_067_3),
            (3, 7.0, 85.175_486_842_843_8),
            (2, 50.0, 2.816_430_640_245_195_4e20),
        ];
        for (n, x, want) in i_cases {
            let got = bessel_i(n, x).unwrap();
            assert!(((got - want) / want).abs() < 1e-13, "I_{n}({x}) = {got}");
        }
    }

    #[test]
    fn series_and_recurrence_agree() {
        for x in [0.5, 1.0, 2.0, 5.0, 10.0] {
            let s = bessel_j_series(2, x, &SeriesConfig::default()).unwrap();
            let r = bessel_j_recurrence(2, x);
            assert!((s - r).abs() < 1e-12, "x={x}: {s} vs {r}");
        }
    }

    #[test]
    fn j2_is_even() {
        for x in [0.3, 1.7, 4.2, 11.9, 25.0] {
            assert_eq!(j2(x), j2(-x));
        }
    }

    #[test]
    fn i2_dominates_j2() {
        for i in 1..=50 {
            let x = 0.1 * i as f64;
            assert!(bessel_i(2, x).unwrap() >= j2(x));
        }
    }

    #[test]
    fn j2_global_maximum() {
        let (mut best_x, mut best) = (0.0, f64::MIN);
        for i in 0..=100_000 {
            let x = 10.0 * i as f64 / 100_000.0;
            let v = j2(x);
            if v > best {
                best = v;
                best_x = x;
            }
        }
        assert!((best - 0.48650).abs() < 1e-4, "max {best}");
        assert!((best_x - 3.054).abs() < 0.01, "argmax {best_x}");
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_i(2, -1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_i(2, 51.0), Err(Error::Domain(_))));
        assert!(bessel_j(2, 2e4).is_err());
        assert!(bessel_j(2, f64::NAN).is_err());
    }

    #[test]
    fn series_config_checks() {
        let bad = SeriesConfig {
            max_terms: 4,
            abs_tol: 1e-15,
        };
        assert!(bad.validate().is_err());
        let short = SeriesConfig {
            max_terms: 8,
            abs_tol: 1e-15,
        };
        assert!(matches!(
            bessel_i_with(2, 40.0, &short),
            Err(Error::Convergence(_))
        ));
    }

    #[test]
    fn h_entire_values() {
        assert_eq!(h_entire(0.0), 0.0);
        assert!((h_entire(0.96) - 0.110_682).abs() < 2e-6);
        assert!((h_entire(-1.0) + I2_1).abs() < 1e-13);
        assert!((h_entire(150.0) - (-0.133_186_017_798_692_8)).abs() < 1e-12);
        // branch agreement away from the origin
        for u in [0.5, 4.0, 40.0, 143.0, 145.0, 900.0, 2500.0] {
            assert!((h_entire(u) - j2(u.sqrt())).abs() < 1e-12, "u={u}");
        }
        for u in [-0.5f64, -4.0, -40.0, -400.0] {
            let i2 = bessel_i(2, (-u).sqrt()).unwrap();
            assert!(((h_entire(u) + i2) / i2).abs() < 1e-13, "u={u}");
        }
    }

    #[test]
    fn h_entire_near_origin() {
        for i in -100..=100 {
            let u = 0.001 * i as f64;
            assert!((h_entire(u) - u / 8.0).abs() <= u * u / 96.0 * 1.01);
        }
        assert_eq!(h_over_u(0.0), 0.125);
    }

    #[test]
    fn sinc_values() {
        assert_eq!(sinc_pi(0.0), 1.0);
        assert!(sinc_pi(std::f64::consts::PI).abs() < 1e-15);
        assert!((sinc_pi(0.42 * std::f64::consts::PI) - 0.73407).abs() < 1e-5);
        assert!((sinc_pi(1e-5) - (1e-5f64).sin() / 1e-5).abs() < 3e-16);
    }
}
