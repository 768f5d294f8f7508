use kdtl_core::data::{
    c60_velocity, c70_beam_velocities, parse_dataset, serialize_dataset, synth_dataset, ModelConfig,
};
use kdtl_core::fit::{fit_alpha, FitOptions};
use kdtl_core::oracle::{oracle_run, OracleConfig};
use kdtl_core::physics::{visibility_at_velocity, visibility_avg, visibility_mono, xi_coherent};
use kdtl_core::{InterferometerGeometry, Molecule, VelocityDistribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

const GOLDEN: &str = include_str!("data/c70_synth_seed7.toml");

fn c70_b() -> ModelConfig {
    ModelConfig {
        label: "C70 synthetic, seed 7".into(),
        molecule: Molecule::c70(),
        geometry: InterferometerGeometry::kdtl_532(),
        velocity: VelocityDistribution::gaussian(117.3, 14.4).unwrap(),
    }
}

fn powers() -> Vec<f64> {
    (1..=20).map(|i| i as f64 / 10.0).collect()
}

/// Plain Monte-Carlo average over the truncated Gaussian, with its standard error.
fn monte_carlo(cfg: &ModelConfig, power: f64, samples: usize, seed: u64) -> (f64, f64) {
    let VelocityDistribution::Gaussian { v_m, delta_v } = cfg.velocity else {
        unreachable!()
    };
    let normal = Normal::new(v_m, delta_v).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum2, mut n) = (0.0, 0.0, 0usize);
    while n < samples {
        let v = normal.sample(&mut rng);
        if v <= 1.0 {
            continue;
        }
        let x = visibility_at_velocity(&cfg.molecule, &cfg.geometry, power, v).unwrap();
        sum += x;
        sum2 += x * x;
        n += 1;
    }
    let mean = sum / n as f64;
    let var = sum2 / n as f64 - mean * mean;
    (mean.abs(), (var / n as f64).sqrt())
}

#[test]
fn quadrature_matches_monte_carlo_for_beam_b() {
    let cfg = c70_b();
    let quad = visibility_avg(&cfg.molecule, &cfg.geometry, &cfg.velocity, 1.0).unwrap();
    let (mc, se) = monte_carlo(&cfg, 1.0, 1_000_000, 2024);
    assert!((quad - mc).abs() < 4.0 * se, "quad {quad} mc {mc} se {se}");
    assert!((quad - 0.032_747_8).abs() < 1e-6, "{quad}");
}

#[test]
fn quadrature_matches_monte_carlo_across_powers() {
    let cfg = c70_b();
    for (i, p) in [0.5, 1.5, 2.0].into_iter().enumerate() {
        let quad = visibility_avg(&cfg.molecule, &cfg.geometry, &cfg.velocity, p).unwrap();
        let (mc, se) = monte_carlo(&cfg, p, 200_000, 11 + i as u64);
        assert!(
            (quad - mc).abs() < 4.0 * se + 1e-9,
            "P={p}: quad {quad} mc {mc} se {se}"
        );
    }
}

#[test]
fn synthetic_golden_file_is_reproduced() {
    let ds = synth_dataset(&c70_b(), &powers(), 0.01, 7).unwrap();
    assert_eq!(serialize_dataset(&ds), GOLDEN);
    assert_eq!(parse_dataset(GOLDEN).unwrap(), ds);
}

#[test]
fn golden_file_stays_within_noise_of_forward_model() {
    let ds = parse_dataset(GOLDEN).unwrap();
    let cfg = c70_b();
    for p in &ds.points {
        let clean = visibility_avg(&cfg.molecule, &cfg.geometry, &cfg.velocity, p.power).unwrap();
        assert!((p.visibility - clean).abs() < 0.05, "P={}", p.power);
    }
}

#[test]
fn coarse_wave_oracle_tracks_closed_form() {
    let cfg = OracleConfig {
        n_periods: 128,
        grid_points: 1 << 15,
        n_angles: 129,
        ..OracleConfig::default()
    };
    for (phi, l) in [(1.0, 0.3), (3.0, 0.5), (2.0, 3.5)] {
        let o = oracle_run(0.42, phi, l, &cfg).unwrap();
        let closed = visibility_mono(0.42, xi_coherent(phi, l), 0.0).unwrap();
        assert!(
            (o.visibility - closed).abs() < 0.02,
            "phi={phi} L/LT={l}: {} vs {closed}",
            o.visibility
        );
    }
}

#[test]
fn fringe_is_not_inverted_between_half_and_three_halves() {
    let cfg = OracleConfig {
        n_periods: 128,
        grid_points: 1 << 15,
        n_angles: 129,
        ..OracleConfig::default()
    };
    let a = oracle_run(0.42, 3.054, 0.5, &cfg).unwrap();
    let b = oracle_run(0.42, 3.054, 1.5, &cfg).unwrap();
    assert!(
        a.visibility > 0.5 && b.visibility > 0.5,
        "{} {}",
        a.visibility,
        b.visibility
    );
    assert!((a.visibility - b.visibility).abs() < 0.01);
}

fn c60_mean_alpha(seeds: std::ops::Range<u64>) -> f64 {
    let powers: Vec<f64> = (1..=40).map(|i| i as f64 / 4.0).collect();
    let cfg = ModelConfig {
        label: "C60".into(),
        molecule: Molecule::c60(),
        geometry: InterferometerGeometry::kdtl_532(),
        velocity: c60_velocity(),
    };
    let n = seeds.end - seeds.start;
    seeds
        .map(|seed| {
            let ds = synth_dataset(&cfg, &powers, 0.02, seed).unwrap();
            fit_alpha(&[ds], &FitOptions::default()).unwrap().alpha
        })
        .sum::<f64>()
        / n as f64
}

#[test]
fn c60_fit_recovers_alpha_over_seeds() {
    let mean = c60_mean_alpha(0..3);
    assert!((mean - 91.0).abs() < 2.0, "{mean}");
    let mean = c60_mean_alpha(0..30);
    assert!((mean - 91.0).abs() < 1.0, "{mean}");
}

#[test]
fn every_caption_beam_yields_visible_fringes() {
    let mol = Molecule::c70();
    let geo = InterferometerGeometry::kdtl_532();
    for (tag, dist) in c70_beam_velocities() {
        let peak = (1..=40)
            .map(|i| visibility_avg(&mol, &geo, &dist, i as f64 * 0.05).unwrap())
            .fold(0.0, f64::max);
        assert!(peak > 0.05 && peak <= 1.0, "({tag}) {peak}");
    }
}
