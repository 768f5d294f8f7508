use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kdtl_core::data::{c70_beam_velocities, synth_dataset, ModelConfig, VisibilityDataset};
use kdtl_core::exec::{self, Execution};
use kdtl_core::fit::{chi_square, FitOptions};
use kdtl_core::oracle::{oracle_run, OracleConfig};
use kdtl_core::physics::visibility_avg;
use kdtl_core::{InterferometerGeometry, Molecule, VelocityDistribution};

const POLICIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn ensemble() -> Vec<VisibilityDataset> {
    let powers: Vec<f64> = (1..=20).map(|i| i as f64 / 10.0).collect();
    c70_beam_velocities()
        .into_iter()
        .map(|(tag, velocity)| {
            let cfg = ModelConfig {
                label: format!("C70 ({tag})"),
                molecule: Molecule::c70(),
                geometry: InterferometerGeometry::kdtl_532(),
                velocity,
            };
            synth_dataset(&cfg, &powers, 0.01, 1).unwrap()
        })
        .collect()
}

fn chi_square_bench(c: &mut Criterion) {
    let data = ensemble();
    let mut group = c.benchmark_group("chi_square");
    for (name, execution) in POLICIES {
        let opts = FitOptions {
            execution,
            ..FitOptions::default()
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| chi_square(black_box(117.0), &data, &opts).unwrap())
        });
    }
    group.finish();
}

fn visibility_batch(c: &mut Criterion) {
    let mol = Molecule::c70();
    let geo = InterferometerGeometry::kdtl_532();
    let dist = VelocityDistribution::gaussian(117.3, 14.4).unwrap();
    let powers: Vec<f64> = (0..512).map(|i| i as f64 * 4.0 / 511.0).collect();
    let mut group = c.benchmark_group("visibility_avg_512");
    for (name, execution) in POLICIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                exec::map(execution, &powers, |&p| {
                    visibility_avg(&mol, &geo, &dist, p).unwrap()
                })
            })
        });
    }
    group.finish();
}

fn oracle_bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("wave_oracle");
    group.sample_size(10);
    for (name, execution) in POLICIES {
        let cfg = OracleConfig {
            n_periods: 64,
            grid_points: 1 << 13,
            n_angles: 65,
            execution,
            ..OracleConfig::default()
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| oracle_run(0.42, black_box(2.0), 0.5, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, chi_square_bench, visibility_batch, oracle_bench);
criterion_main!(benches);
