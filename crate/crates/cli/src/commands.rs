use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use kdtl_core::constants::{ANGSTROM3, CM2, NM};
use kdtl_core::data::{
    extract_visibility, parse_scan, read_dataset, read_model_config, serialize_dataset, synth_dataset,
    ModelConfig, VisibilityDataset,
};
use kdtl_core::fit::{analyze, fit_alpha, BudgetMode, FitOptions};
use kdtl_core::oracle::{oracle_run, OracleConfig};
use kdtl_core::physics::{visibility_at_velocity, visibility_avg, visibility_mono, xi_coherent};
use kdtl_core::VelocityDistribution;

use crate::output::{emit, num, ConfigHash, Header, Table};
use crate::{Budget, Command, Common, InputError, PowerGrid};

fn input(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

pub fn run(common: &Common, command: &Command) -> Result<()> {
    match command {
        Command::Predict { grid, alpha_a3, mono } => predict(common, command, grid, *alpha_a3, *mono),
        Command::Fit { datasets, .. } => fit(common, command, datasets),
        Command::Extract { scan, period_nm } => extract(common, command, scan, *period_nm),
        Command::Synth {
            grid,
            alpha_a3,
            noise,
        } => synth(common, command, grid, *alpha_a3, *noise),
        Command::Sensitivity { datasets, rel_change } => sensitivity(common, command, datasets, *rel_change),
        Command::Oracle { .. } => oracle(common, command),
    }
}

/// Hash of the parsed arguments (minus `--out`) and the bytes of every input file.
fn config_hash(common: &Common, command: &Command, files: &[PathBuf]) -> Result<String> {
    let name = format!("{command:?}");
    let mut h = ConfigHash::new(name.split([' ', '{']).next().unwrap_or(""));
    h.text("command", &name);
    let mut c = common.clone();
    c.out = None;
    h.text("common", format!("{c:?}"));
    for f in files {
        h.file(f)?;
    }
    Ok(h.finish())
}

fn power_calibration(common: &Common) -> Result<f64> {
    let k = common.power_calibration.unwrap_or(1.0);
    if !(k > 0.0 && k.is_finite()) {
        return Err(input(format!("--power-calibration must be > 0, got {k}")));
    }
    Ok(k)
}

fn sigma_override(common: &Common) -> Result<Option<f64>> {
    match common.sigma_abs_cm2 {
        Some(s) if !(s >= 0.0 && s.is_finite()) => {
            Err(input(format!("--sigma-abs-cm2 must be >= 0, got {s}")))
        }
        other => Ok(other),
    }
}

fn apply_overrides(mut model: ModelConfig, common: &Common) -> Result<ModelConfig> {
    if let Some(s) = sigma_override(common)? {
        model.molecule = model.molecule.with_sigma_abs(s * CM2);
    }
    if common.dv_zero {
        model.velocity = VelocityDistribution::monochromatic(model.velocity.most_probable())?;
    }
    Ok(model)
}

fn load_model(common: &Common, alpha_a3: Option<f64>) -> Result<ModelConfig> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| input("--config <model.toml> is required"))?;
    let mut model = apply_overrides(
        read_model_config(path).with_context(|| format!("loading {}", path.display()))?,
        common,
    )?;
    if let Some(a) = alpha_a3 {
        if !(a > 0.0 && a.is_finite()) {
            return Err(input(format!("--alpha-a3 must be > 0, got {a}")));
        }
        model.molecule = model.molecule.with_alpha_a3(a);
    }
    if model.molecule.alpha_vol <= 0.0 {
        return Err(input(
            "no polarizability: set alpha_A3 under [molecule] or pass --alpha-a3",
        ));
    }
    Ok(model)
}

fn powers(grid: &PowerGrid) -> Result<Vec<f64>> {
    let list = if !grid.powers.is_empty() {
        grid.powers.clone()
    } else {
        if grid.n_powers == 0 || !(grid.p_min <= grid.p_max) {
            return Err(input("power grid needs --n-powers >= 1 and --p-min <= --p-max"));
        }
        let n = grid.n_powers;
        (0..n)
            .map(|i| {
                if n == 1 {
                    grid.p_min
                } else {
                    grid.p_min + (grid.p_max - grid.p_min) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    };
    if let Some(p) = list.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
        return Err(input(format!("powers must be finite and >= 0, got {p}")));
    }
    Ok(list)
}

fn describe(model: &ModelConfig) -> String {
    let velocity = match &model.velocity {
        VelocityDistribution::Gaussian { v_m, delta_v } => format!("gaussian v_m={v_m} m/s dv={delta_v} m/s"),
        VelocityDistribution::Tabulated(t) => format!("tabulated ({} entries)", t.len()),
    };
    format!(
        "model: {} | alpha_A3={:?} | sigma_abs_cm2={:?} | {}",
        model.label,
        model.molecule.alpha_vol / ANGSTROM3,
        model.molecule.sigma_abs / CM2,
        velocity
    )
}

fn config_files(common: &Common) -> Vec<PathBuf> {
    common.config.iter().cloned().collect()
}

fn predict(
    common: &Common,
    command: &Command,
    grid: &PowerGrid,
    alpha_a3: Option<f64>,
    mono: bool,
) -> Result<()> {
    let model = load_model(common, alpha_a3)?;
    let k = power_calibration(common)?;
    let powers = powers(grid)?;
    let v_mode = model.velocity.most_probable();
    let mut columns = vec!["power_W", "visibility"];
    if mono {
        columns.push("visibility_mono");
    }
    let mut table = Table::new(&columns);
    for &p in &powers {
        let mut row = vec![
            num(p),
            num(visibility_avg(
                &model.molecule,
                &model.geometry,
                &model.velocity,
                k * p,
            )?),
        ];
        if mono {
            row.push(num(visibility_at_velocity(
                &model.molecule,
                &model.geometry,
                k * p,
                v_mode,
            )?
            .abs()));
        }
        table.row(row);
    }
    let header = Header::new(
        "predict",
        &config_hash(common, command, &config_files(common))?,
        common.seed,
    )
    .line("units: power_W [W], visibility [1], visibility_mono [1]")
    .line(describe(&model))
    .line(format!("power_calibration: {k}"))
    .line(format!("mono_velocity_mps: {v_mode}"));
    emit(common.out.as_deref(), &table.render(&header))
}

fn load_datasets(common: &Common, files: &[PathBuf]) -> Result<(Vec<PathBuf>, Vec<VisibilityDataset>)> {
    let mut paths: Vec<PathBuf> = common.config.iter().cloned().collect();
    paths.extend(files.iter().cloned());
    if paths.is_empty() {
        return Err(input("no dataset files given"));
    }
    let sets = paths
        .iter()
        .map(|p| {
            let ds = read_dataset(p).with_context(|| format!("loading {}", p.display()))?;
            let model = apply_overrides(ds.model(), common)?;
            Ok(VisibilityDataset {
                molecule: model.molecule,
                velocity: model.velocity,
                ..ds
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((paths, sets))
}

fn fit(common: &Common, command: &Command, files: &[PathBuf]) -> Result<()> {
    let Command::Fit {
        alpha_min,
        alpha_max,
        alpha_tol,
        budget,
        rel_change,
        power_uncertainty,
        waist_uncertainty,
        ..
    } = command
    else {
        unreachable!()
    };
    let (paths, datasets) = load_datasets(common, files)?;
    let options = FitOptions {
        alpha_bracket: (*alpha_min, *alpha_max),
        alpha_tol: *alpha_tol,
        power_calibration: power_calibration(common)?,
        sigma_abs_rel_change: *rel_change,
        power_rel_uncertainty: *power_uncertainty,
        waist_rel_uncertainty: *waist_uncertainty,
        budget_mode: match budget {
            Budget::Quadrature => BudgetMode::Quadrature,
            Budget::Linear => BudgetMode::Linear,
        },
        ..FitOptions::default()
    };
    let result = analyze(&datasets, &options)?;
    let hash = config_hash(common, command, &paths)?;

    let a = result.alpha;
    println!(
        "alpha_L = {a:.3} Å³  ({} datasets, {} points)",
        datasets.len(),
        result.dof + 1
    );
    println!(
        "  statistical (Δχ² = 1): [{:.3}, {:.3}] Å³, χ² = {:.4}",
        result.stat_interval.0, result.stat_interval.1, result.chi2
    );
    match result.envelope_interval {
        Some((lo, hi)) => println!("  error-bar envelope:     [{lo:.3}, {hi:.3}] Å³"),
        None => println!("  error-bar envelope:     not applicable (no error bars)"),
    }
    for c in &result.budget {
        println!("  {:<26} {:>6.2} %", c.name, 100.0 * c.relative);
    }
    println!(
        "  total ({}): {:.2} %  →  {a:.1} ± {:.1} Å³",
        match options.budget_mode {
            BudgetMode::Quadrature => "quadrature",
            BudgetMode::Linear => "linear",
        },
        100.0 * result.total_rel_uncertainty,
        a * result.total_rel_uncertainty
    );
    for w in &result.warnings {
        println!("  warning: {w}");
    }

    if let Some(out) = common.out.as_deref() {
        let sigmas: Vec<String> = datasets.iter().map(|d| num(d.molecule.sigma_abs / CM2)).collect();
        let files: Vec<String> = paths
            .iter()
            .map(|p| format!("{:?}", p.display().to_string()))
            .collect();
        let header = Header::new("fit", &hash, common.seed).line("units: alpha [Å³], relative entries [1]");
        let report = format!(
            "{}{}\n[metadata]\nconfig_hash = {:?}\nfiles = [{}]\npower_calibration = {}\nsigma_abs_override = {}\nsigma_abs_cm2 = [{}]\ndv_zero = {}\n",
            header.render(),
            result.to_toml(),
            hash,
            files.join(", "),
            num(options.power_calibration),
            common.sigma_abs_cm2.is_some(),
            sigmas.join(", "),
            common.dv_zero
        );
        emit(Some(out), &report)?;
    }
    Ok(())
}

fn extract(common: &Common, command: &Command, path: &Path, period_nm: f64) -> Result<()> {
    if !(period_nm > 0.0 && period_nm.is_finite()) {
        return Err(input(format!("--period-nm must be > 0, got {period_nm}")));
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let scan = parse_scan(&text, period_nm * NM).with_context(|| format!("parsing {}", path.display()))?;
    let record = extract_visibility(&scan)?;
    let mut table = Table::new(&["estimator", "visibility", "phase_nm", "mean_counts", "sigma_v"]);
    for (name, e) in [("sinusoid_fit", record.fit), ("max_min", record.max_min)] {
        table.row(vec![
            name.to_string(),
            num(e.visibility),
            num(e.phase / NM),
            num(e.mean),
            num(e.sigma_v),
        ]);
    }
    let header = Header::new(
        "extract",
        &config_hash(common, command, &[path.to_path_buf()])?,
        common.seed,
    )
    .line("units: visibility [1], phase_nm [nm], mean_counts [counts], sigma_v [1]")
    .line(format!(
        "period_nm: {period_nm}, samples: {}",
        scan.positions.len()
    ));
    emit(common.out.as_deref(), &table.render(&header))
}

fn synth(
    common: &Common,
    command: &Command,
    grid: &PowerGrid,
    alpha_a3: Option<f64>,
    noise: f64,
) -> Result<()> {
    let model = load_model(common, alpha_a3)?;
    let k = power_calibration(common)?;
    let recorded = powers(grid)?;
    let seed = common.seed.unwrap_or(0);
    let modelled: Vec<f64> = recorded.iter().map(|p| k * p).collect();
    let mut ds = synth_dataset(&model, &modelled, noise, seed)?;
    for (p, &r) in ds.points.iter_mut().zip(&recorded) {
        p.power = r;
    }
    let header = Header::new(
        "synth",
        &config_hash(common, command, &config_files(common))?,
        Some(seed),
    )
    .line("synthetic data, not a measurement")
    .line("units: power_W [W], visibility [1]")
    .line(format!("noise_sigma: {noise}, power_calibration: {k}"));
    emit(
        common.out.as_deref(),
        &format!("{}{}", header.render(), serialize_dataset(&ds)),
    )
}

fn sensitivity(common: &Common, command: &Command, files: &[PathBuf], rel_change: f64) -> Result<()> {
    if !(0.0..1.0).contains(&rel_change) {
        return Err(input(format!(
            "--rel-change must lie in [0, 1), got {rel_change}"
        )));
    }
    let (paths, datasets) = load_datasets(common, files)?;
    let options = FitOptions {
        power_calibration: power_calibration(common)?,
        ..FitOptions::default()
    };
    let scaled = |s: f64| -> Vec<VisibilityDataset> {
        datasets
            .iter()
            .map(|d| VisibilityDataset {
                molecule: d.molecule.with_sigma_abs(d.molecule.sigma_abs * s),
                ..d.clone()
            })
            .collect()
    };
    let base = fit_alpha(&datasets, &options)?.alpha;
    let mut table = Table::new(&["sigma_abs_scale", "alpha_A3", "relative_shift"]);
    let mut worst: f64 = 0.0;
    for s in [1.0 - rel_change, 1.0, 1.0 + rel_change] {
        let a = if s == 1.0 {
            base
        } else {
            fit_alpha(&scaled(s), &options)?.alpha
        };
        let shift = (a - base) / base;
        worst = worst.max(shift.abs());
        table.row(vec![num(s), num(a), num(shift)]);
    }
    let header = Header::new("sensitivity", &config_hash(common, command, &paths)?, common.seed)
        .line("units: alpha_A3 [Å³], relative_shift [1]")
        .line(format!("max_relative_shift: {worst}"));
    emit(common.out.as_deref(), &table.render(&header))
}

fn oracle(common: &Common, command: &Command) -> Result<()> {
    let Command::Oracle {
        phi,
        l_over_lt,
        f,
        periods,
        grid_log2,
        angles,
    } = command
    else {
        unreachable!()
    };
    if *grid_log2 > 26 {
        return Err(input(format!("--grid-log2 {grid_log2} is too large (max 26)")));
    }
    let f = match (f, &common.config) {
        (Some(f), _) => *f,
        (None, Some(path)) => read_model_config(path)?.geometry.f,
        (None, None) => 0.42,
    };
    let cfg = OracleConfig {
        n_periods: *periods,
        grid_points: 1usize << grid_log2,
        n_angles: *angles,
        ..OracleConfig::default()
    };
    cfg.validate()?;
    let mut table = Table::new(&[
        "phi_max",
        "l_over_lt",
        "closed_form",
        "oracle",
        "abs_difference",
        "energy_error",
        "alias_fraction",
    ]);
    let mut worst: f64 = 0.0;
    for &p in phi {
        for &l in l_over_lt {
            let closed = visibility_mono(f, xi_coherent(p, l), 0.0)?;
            let o = oracle_run(f, p, l, &cfg)?;
            let diff = (o.visibility - closed).abs();
            worst = worst.max(diff);
            table.row(vec![
                num(p),
                num(l),
                num(closed),
                num(o.visibility),
                num(diff),
                num(o.max_energy_error),
                num(o.alias_fraction),
            ]);
        }
    }
    let header = Header::new(
        "oracle",
        &config_hash(common, command, &config_files(common))?,
        common.seed,
    )
    .line("units: phi_max [rad], l_over_lt [1], visibilities signed [1]")
    .line(format!(
        "f: {f}, periods: {periods}, grid_points: {}, angles: {angles}",
        cfg.grid_points
    ))
    .line(format!("max_abs_difference: {worst}"));
    emit(common.out.as_deref(), &table.render(&header))
}
