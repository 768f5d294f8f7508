//! Visibility datasets, their TOML document form, fringe scans and seeded
//! synthetic data.
//!
//! A dataset document looks like
//!
//! ```toml
//! label = "C70 (a)"
//!
//! [molecule]
//! name = "C70"
//! mass_amu = 840.77
//! alpha_A3 = 117.0        # optional
//! sigma_abs_cm2 = 2.1e-17
//!
//! [geometry]
//! d_nm = 266.0
//! f = 0.42
//! L_mm = 105.0
//! lambda_nm = 532.0
//! wy_um = 900.0
//! wx_um = 20.0
//!
//! [velocity]
//! form = "gaussian"       # or "tabulated" with table = [[v, w], ...]
//! vm_mps = 99.7
//! dv_mps = 18.3
//!
//! [[points]]
//! power_W = 0.5           # or power_mW
//! visibility = 0.31
//! sigma_v = 0.01          # optional
//! ```
//!
//! Unknown keys are rejected.

mod scan;
mod synth;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constants::*;
use crate::error::{Error, Result};
use crate::physics::{InterferometerGeometry, Molecule};
use crate::velocity::VelocityDistribution;

pub use scan::{
    extract_visibility, parse_scan, synth_scan, Estimate, ExtractionRecord, FringeScan, ScanNoise,
};
pub use synth::{c60_velocity, c70_beam_velocities, noise_rng, synth_dataset};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityPoint {
    /// W
    pub power: f64,
    pub visibility: f64,
    pub sigma_v: Option<f64>,
}

impl VisibilityPoint {
    pub fn validate(&self) -> Result<()> {
        if !(self.power >= 0.0 && self.power.is_finite()) {
            return Err(Error::Validation(format!(
                "power must be >= 0, got {} W",
                self.power
            )));
        }
        if !(0.0..=1.0).contains(&self.visibility) {
            return Err(Error::Validation(format!(
                "visibility must lie in [0, 1], got {}",
                self.visibility
            )));
        }
        if let Some(s) = self.sigma_v {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::Validation(format!("sigma_v must be > 0, got {s}")));
            }
        }
        Ok(())
    }

    /// Weight σ used in χ²; unit when no error bar was recorded.
    pub fn sigma_or_unit(&self) -> f64 {
        self.sigma_v.unwrap_or(1.0)
    }
}

/// Everything the forward model needs, without measured points.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub label: String,
    pub molecule: Molecule,
    pub geometry: InterferometerGeometry,
    pub velocity: VelocityDistribution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VisibilityDataset {
    pub label: String,
    pub molecule: Molecule,
    pub geometry: InterferometerGeometry,
    pub velocity: VelocityDistribution,
    pub points: Vec<VisibilityPoint>,
}

impl VisibilityDataset {
    /// Sorts the points by power and checks every invariant.
    pub fn new(config: ModelConfig, mut points: Vec<VisibilityPoint>) -> Result<Self> {
        points.sort_by(|a, b| a.power.total_cmp(&b.power));
        let ds = VisibilityDataset {
            label: config.label,
            molecule: config.molecule,
            geometry: config.geometry,
            velocity: config.velocity,
            points,
        };
        ds.validate()?;
        Ok(ds)
    }

    pub fn validate(&self) -> Result<()> {
        self.molecule.validate()?;
        self.geometry.validate()?;
        self.velocity.validate()?;
        if self.points.len() < 2 {
            return Err(Error::Validation(format!(
                "dataset `{}` needs at least 2 points, has {}",
                self.label,
                self.points.len()
            )));
        }
        for p in &self.points {
            p.validate()?;
        }
        if let Some(w) = self.points.windows(2).find(|w| w[1].power <= w[0].power) {
            return Err(Error::Validation(format!(
                "powers must be strictly increasing; {} W is repeated or out of order",
                w[1].power
            )));
        }
        Ok(())
    }

    pub fn model(&self) -> ModelConfig {
        ModelConfig {
            label: self.label.clone(),
            molecule: self.molecule.clone(),
            geometry: self.geometry.clone(),
            velocity: self.velocity.clone(),
        }
    }

    pub fn has_error_bars(&self) -> bool {
        self.points.iter().any(|p| p.sigma_v.is_some())
    }
}

// ---- document schema -------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetDoc {
    label: String,
    molecule: MoleculeDoc,
    geometry: GeometryDoc,
    velocity: VelocityDoc,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    points: Vec<PointDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct MoleculeDoc {
    name: String,
    mass_amu: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha_A3: Option<f64>,
    sigma_abs_cm2: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct GeometryDoc {
    d_nm: f64,
    f: f64,
    L_mm: f64,
    lambda_nm: f64,
    wy_um: f64,
    wx_um: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VelocityDoc {
    form: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vm_mps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dv_mps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct PointDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    power_W: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    power_mW: Option<f64>,
    visibility: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma_v: Option<f64>,
}

/// Lab-unit value `y` with `y * unit == si` exactly when such a `y` exists
/// within a few ulps of `si / unit`.
fn to_lab(si: f64, unit: f64) -> f64 {
    let y = si / unit;
    if y * unit == si {
        return y;
    }
    let (mut up, mut down) = (y, y);
    for _ in 0..4 {
        up = up.next_up();
        down = down.next_down();
        if up * unit == si {
            return up;
        }
        if down * unit == si {
            return down;
        }
    }
    y
}

fn field_from_toml_message(msg: &str) -> String {
    // toml reports keys in backticks, e.g. "missing field `d_nm`"
    msg.split('`').nth(1).unwrap_or("document").to_string()
}

fn decode(text: &str) -> Result<DatasetDoc> {
    toml::from_str(text).map_err(|e| {
        let msg = e.message().to_string();
        Error::parse(field_from_toml_message(&msg), msg)
    })
}

fn model_from_doc(doc: &DatasetDoc) -> Result<ModelConfig> {
    let m = &doc.molecule;
    let molecule = Molecule {
        name: m.name.clone(),
        mass: m.mass_amu * ATOMIC_MASS_UNIT,
        alpha_vol: m.alpha_A3.unwrap_or(0.0) * ANGSTROM3,
        sigma_abs: m.sigma_abs_cm2 * CM2,
    };
    molecule.validate()?;

    let g = &doc.geometry;
    let geometry = InterferometerGeometry {
        d: g.d_nm * NM,
        f: g.f,
        l: g.L_mm * MM,
        lambda_l: g.lambda_nm * NM,
        w_y: g.wy_um * UM,
        w_x: g.wx_um * UM,
    };
    geometry.validate()?;

    let v = &doc.velocity;
    let velocity = match v.form.as_str() {
        "gaussian" => {
            if v.table.is_some() {
                return Err(Error::parse("table", "not allowed for form = \"gaussian\""));
            }
            let vm = v
                .vm_mps
                .ok_or_else(|| Error::parse("vm_mps", "required for form = \"gaussian\""))?;
            let dv = v
                .dv_mps
                .ok_or_else(|| Error::parse("dv_mps", "required for form = \"gaussian\""))?;
            VelocityDistribution::gaussian(vm, dv)?
        }
        "tabulated" => {
            if v.vm_mps.is_some() || v.dv_mps.is_some() {
                return Err(Error::parse(
                    "velocity",
                    "vm_mps/dv_mps not allowed for form = \"tabulated\"",
                ));
            }
            let table = v
                .table
                .as_ref()
                .ok_or_else(|| Error::parse("table", "required for form = \"tabulated\""))?;
            VelocityDistribution::tabulated(table.iter().map(|r| (r[0], r[1])).collect())?
        }
        other => {
            return Err(Error::parse(
                "form",
                format!("expected \"gaussian\" or \"tabulated\", got \"{other}\""),
            ))
        }
    };

    Ok(ModelConfig {
        label: doc.label.clone(),
        molecule,
        geometry,
        velocity,
    })
}

fn point_from_doc(p: &PointDoc, index: usize) -> Result<VisibilityPoint> {
    let power = match (p.power_W, p.power_mW) {
        (Some(w), None) => w,
        (None, Some(mw)) => mw * MW,
        _ => {
            return Err(Error::parse(
                format!("points[{index}].power_W"),
                "exactly one of power_W or power_mW is required",
            ))
        }
    };
    let point = VisibilityPoint {
        power,
        visibility: p.visibility,
        sigma_v: p.sigma_v,
    };
    point
        .validate()
        .map_err(|e| Error::Validation(format!("points[{index}]: {e}")))?;
    Ok(point)
}

/// Reads a model configuration; a `points` array, if present, is ignored.
pub fn parse_model_config(text: &str) -> Result<ModelConfig> {
    model_from_doc(&decode(text)?)
}

pub fn parse_dataset(text: &str) -> Result<VisibilityDataset> {
    let doc = decode(text)?;
    let config = model_from_doc(&doc)?;
    let points = doc
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| point_from_doc(p, i))
        .collect::<Result<Vec<_>>>()?;
    VisibilityDataset::new(config, points)
}

fn doc_from_model(config: &ModelConfig, points: &[VisibilityPoint]) -> DatasetDoc {
    let m = &config.molecule;
    let g = &config.geometry;
    let velocity = match &config.velocity {
        VelocityDistribution::Gaussian { v_m, delta_v } => VelocityDoc {
            form: "gaussian".into(),
            vm_mps: Some(*v_m),
            dv_mps: Some(*delta_v),
            table: None,
        },
        VelocityDistribution::Tabulated(t) => VelocityDoc {
            form: "tabulated".into(),
            vm_mps: None,
            dv_mps: None,
            table: Some(t.iter().map(|&(v, w)| [v, w]).collect()),
        },
    };
    DatasetDoc {
        label: config.label.clone(),
        molecule: MoleculeDoc {
            name: m.name.clone(),
            mass_amu: to_lab(m.mass, ATOMIC_MASS_UNIT),
            alpha_A3: (m.alpha_vol != 0.0).then(|| to_lab(m.alpha_vol, ANGSTROM3)),
            sigma_abs_cm2: to_lab(m.sigma_abs, CM2),
        },
        geometry: GeometryDoc {
            d_nm: to_lab(g.d, NM),
            f: g.f,
            L_mm: to_lab(g.l, MM),
            lambda_nm: to_lab(g.lambda_l, NM),
            wy_um: to_lab(g.w_y, UM),
            wx_um: to_lab(g.w_x, UM),
        },
        velocity,
        points: points
            .iter()
            .map(|p| PointDoc {
                power_W: Some(p.power),
                power_mW: None,
                visibility: p.visibility,
                sigma_v: p.sigma_v,
            })
            .collect(),
    }
}

pub fn serialize_dataset(ds: &VisibilityDataset) -> String {
    toml::to_string(&doc_from_model(&ds.model(), &ds.points)).expect("dataset document serializes")
}

pub fn serialize_model_config(config: &ModelConfig) -> String {
    toml::to_string(&doc_from_model(config, &[])).expect("model document serializes")
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn read_dataset(path: impl AsRef<Path>) -> Result<VisibilityDataset> {
    parse_dataset(&read_text(path.as_ref())?)
}

pub fn read_model_config(path: impl AsRef<Path>) -> Result<ModelConfig> {
    parse_model_config(&read_text(path.as_ref())?)
}

pub fn write_dataset(path: impl AsRef<Path>, ds: &VisibilityDataset) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, serialize_dataset(ds)).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const DATASET_A: &str = r#"
label = "C70 (a)"

[molecule]
name = "C70"
mass_amu = 840.77
sigma_abs_cm2 = 2.1e-17

[geometry]
d_nm = 266.0
f = 0.42
L_mm = 105.0
lambda_nm = 532.0
wy_um = 900.0
wx_um = 20.0

[velocity]
form = "gaussian"
vm_mps = 99.7
dv_mps = 18.3

[[points]]
power_W = 0.8
visibility = 0.21
sigma_v = 0.02

[[points]]
power_mW = 400.0
visibility = 0.12
sigma_v = 0.01
"#;

    #[test]
    fn parses_beam_a_dataset() {
        let ds = parse_dataset(DATASET_A).unwrap();
        assert_eq!(
            ds.velocity,
            VelocityDistribution::Gaussian {
                v_m: 99.7,
                delta_v: 18.3
            }
        );
        assert_eq!(ds.points.len(), 2);
        // sorted, mW converted
        assert!((ds.points[0].power - 0.4).abs() < 1e-15);
        assert_eq!(ds.points[1].power, 0.8);
        assert!((ds.molecule.sigma_abs - 2.1e-21).abs() < 1e-35);
        assert_eq!(ds.molecule.alpha_vol, 0.0);
        assert!((ds.geometry.l - 0.105).abs() < 1e-15);
    }

    #[test]
    fn negative_power_is_a_validation_error() {
        let text = DATASET_A.replace("power_W = 0.8", "power_W = -0.8");
        assert!(matches!(parse_dataset(&text), Err(Error::Validation(_))));
    }

    #[test]
    fn missing_error_bars_accepted() {
        let text = DATASET_A
            .replace("sigma_v = 0.02\n", "")
            .replace("sigma_v = 0.01\n", "");
        let ds = parse_dataset(&text).unwrap();
        assert!(ds.points.iter().all(|p| p.sigma_v.is_none()));
        assert!(!ds.has_error_bars());
        assert_eq!(ds.points[0].sigma_or_unit(), 1.0);
    }

    #[test]
    fn unknown_and_missing_keys_name_the_field() {
        let text = DATASET_A.replace("f = 0.42", "f = 0.42\ncolour = \"green\"");
        match parse_dataset(&text) {
            Err(Error::Parse { field, .. }) => assert_eq!(field, "colour"),
            other => panic!("{other:?}"),
        }
        let text = DATASET_A.replace("d_nm = 266.0\n", "");
        match parse_dataset(&text) {
            Err(Error::Parse { field, .. }) => assert_eq!(field, "d_nm"),
            other => panic!("{other:?}"),
        }
        let text = DATASET_A.replace("form = \"gaussian\"", "form = \"maxwell\"");
        assert!(matches!(parse_dataset(&text), Err(Error::Parse { .. })));
    }

    #[test]
    fn invariant_breaches() {
        let text = DATASET_A.replace("lambda_nm = 532.0", "lambda_nm = 500.0");
        assert!(matches!(parse_dataset(&text), Err(Error::Validation(_))));
        let text = DATASET_A.replace("power_mW = 400.0", "power_mW = 800.0");
        assert!(matches!(parse_dataset(&text), Err(Error::Validation(_))));
        let text = DATASET_A.replace("visibility = 0.21", "visibility = 1.2");
        assert!(matches!(parse_dataset(&text), Err(Error::Validation(_))));
        let text = DATASET_A.replace("sigma_v = 0.01", "sigma_v = 0.0");
        assert!(matches!(parse_dataset(&text), Err(Error::Validation(_))));
    }

    #[test]
    fn single_point_rejected() {
        let cut = DATASET_A.find("[[points]]\npower_mW").unwrap();
        assert!(matches!(
            parse_dataset(&DATASET_A[..cut]),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn tabulated_round_trip() {
        let text = DATASET_A.replace(
            "form = \"gaussian\"\nvm_mps = 99.7\ndv_mps = 18.3",
            "form = \"tabulated\"\ntable = [[90.0, 1.0], [110.0, 2.5]]",
        );
        let ds = parse_dataset(&text).unwrap();
        assert_eq!(
            ds.velocity,
            VelocityDistribution::Tabulated(vec![(90.0, 1.0), (110.0, 2.5)])
        );
        assert_eq!(parse_dataset(&serialize_dataset(&ds)).unwrap(), ds);
    }

    #[test]
    fn model_config_ignores_points() {
        let cfg = parse_model_config(DATASET_A).unwrap();
        assert_eq!(cfg.label, "C70 (a)");
        let again = parse_model_config(&serialize_model_config(&cfg)).unwrap();
        assert_eq!(again, cfg);
    }
}
