//! Run configuration: TOML schema, named presets and validation.
//!
//! A config file may set any subset of keys; the rest come from the preset
//! named by `preset` (default `fig2-ctl`). [`write_config`] always emits the
//! fully populated form.
//!
//! ```toml
//! preset = "fig3-lambda"
//!
//! [medium]
//! eta = 0.05
//! fields = [[0.5, 3.141592653589793], [0.5, 0.0], [0.7, 0.0], [0.7, 0.0]]
//!
//! [stack]
//! thickness = 4e-7
//!
//! [sweep.theta_deg]
//! min = 32.0
//! max = 36.0
//! count = 401
//! ```

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atomic_medium::{effective_couplings, ControlFieldSet, EffectiveCouplings, MediumParams};
use crate::beam_shifts::{BeamParams, SlopeUnit, DEFAULT_WAIST_IN_WAVELENGTHS};
use crate::multilayer_optics::{LayerStack, DEFAULT_THICKNESS, DEFAULT_WAVELENGTH, GLASS_PERMITTIVITY};
use crate::sweep_engine::{AxisRange, Scenario, SweepGrid};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Validation(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl From<crate::Error> for ConfigError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::Validation(msg) => ConfigError::Validation(msg),
            other => ConfigError::Validation(other.to_string()),
        }
    }
}

/// Named parameter sets. `fig2-ctl` is the default profile.
pub const PRESETS: &[&str] = &["fig2-ctl", "fig2f-ctl", "fig3-lambda", "fig4-n", "fig4-n-low-density"];

pub const DEFAULT_PRESET: &str = "fig2-ctl";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectCouplings {
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MediumConfig {
    pub gamma_b: f64,
    pub gamma_e: f64,
    pub eta: f64,
    /// `[amplitude, phase]` of Ω1..Ω4 (γ, radians).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fields: Option<[[f64; 2]; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub couplings: Option<DirectCouplings>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StackConfig {
    pub eps1: [f64; 2],
    pub eps3: [f64; 2],
    /// meters
    pub thickness: f64,
    /// meters
    pub wavelength: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamConfig {
    pub waist_in_wavelengths: f64,
    pub slope_unit: SlopeUnit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
    pub manifest_header: bool,
    /// Exit status 3 when more than this fraction of rows is flagged.
    pub max_flagged_fraction: f64,
}

/// Fully populated, validated configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub preset: String,
    pub medium: MediumConfig,
    pub stack: StackConfig,
    pub beam: BeamConfig,
    pub sweep: SweepGrid,
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn preset(name: &str) -> Result<Self, ConfigError> {
        use std::f64::consts::PI;
        let (eta, fields) = match name {
            "fig2-ctl" => (0.1, [[1.5, 0.0], [3.0, 0.0], [2.5, 0.0], [0.9, 0.0]]),
            "fig2f-ctl" => (0.01, [[1.5, 0.0], [3.0, 0.0], [2.5, 0.0], [0.9, 0.0]]),
            "fig3-lambda" => (0.1, [[0.5, PI], [0.5, 0.0], [0.7, 0.0], [0.7, 0.0]]),
            "fig4-n" => (0.1, [[0.5, 0.0], [0.5, 0.0], [0.7, 0.0], [0.7, 0.0]]),
            "fig4-n-low-density" => (0.01, [[0.5, 0.0], [0.5, 0.0], [0.7, 0.0], [0.7, 0.0]]),
            other => {
                return Err(ConfigError::Validation(format!(
                    "unknown preset '{other}' (known: {})",
                    PRESETS.join(", ")
                )))
            }
        };
        Ok(Self {
            preset: name.to_string(),
            medium: MediumConfig { gamma_b: 1.0, gamma_e: 1.0, eta, fields: Some(fields), couplings: None },
            stack: StackConfig {
                eps1: [GLASS_PERMITTIVITY, 0.0],
                eps3: [GLASS_PERMITTIVITY, 0.0],
                thickness: DEFAULT_THICKNESS,
                wavelength: DEFAULT_WAVELENGTH,
            },
            beam: BeamConfig { waist_in_wavelengths: DEFAULT_WAIST_IN_WAVELENGTHS, slope_unit: SlopeUnit::Degree },
            sweep: SweepGrid::default(),
            output: OutputConfig {
                path: None,
                format: OutputFormat::Csv,
                manifest_header: false,
                max_flagged_fraction: 0.05,
            },
        })
    }

    pub fn field_set(&self) -> Result<Option<ControlFieldSet>, ConfigError> {
        self.medium
            .fields
            .map(|f| ControlFieldSet::from_polar(f.map(|[a, p]| (a, p))).map_err(ConfigError::from))
            .transpose()
    }

    pub fn couplings(&self) -> Result<EffectiveCouplings, ConfigError> {
        match (&self.medium.fields, &self.medium.couplings) {
            (Some(_), None) => Ok(effective_couplings(&self.field_set()?.expect("fields present"))?),
            (None, Some(d)) => Ok(EffectiveCouplings::direct(
                Complex64::new(d.alpha[0], d.alpha[1]),
                Complex64::new(d.beta[0], d.beta[1]),
                d.omega,
            )?),
            (Some(_), Some(_)) => {
                Err(ConfigError::Validation("medium: set either fields or couplings, not both".into()))
            }
            (None, None) => Err(ConfigError::Validation("medium: fields or couplings required".into())),
        }
    }

    pub fn medium_params(&self) -> Result<MediumParams, ConfigError> {
        Ok(MediumParams::new(self.medium.gamma_b, self.medium.gamma_e, self.medium.eta, self.couplings()?)?)
    }

    /// Stack with the medium layer left as vacuum; sweeps fill in ε2(Δp).
    pub fn layer_stack(&self) -> Result<LayerStack, ConfigError> {
        let c = |v: [f64; 2]| Complex64::new(v[0], v[1]);
        Ok(LayerStack::new(c(self.stack.eps1), Complex64::new(1.0, 0.0), c(self.stack.eps3), self.stack.thickness)?)
    }

    pub fn beam_params(&self) -> Result<BeamParams, ConfigError> {
        let stack = self.layer_stack()?;
        let lambda = self.stack.wavelength;
        let b = BeamParams {
            w0: self.beam.waist_in_wavelengths * lambda,
            lambda,
            n1: stack.eps1.sqrt().re,
            slope_unit: self.beam.slope_unit,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn scenario(&self) -> Result<Scenario, ConfigError> {
        let mut s = Scenario::new(self.medium_params()?, self.layer_stack()?, self.beam_params()?);
        s.fields = self.field_set()?;
        if s.fields.is_some() && self.medium.couplings.is_none() {
            s = s.with_fields(s.fields.expect("checked"))?;
        }
        Ok(s)
    }

    /// Checks every physical invariant.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.medium.eta.is_finite() && self.medium.eta >= 0.0) {
            return Err(ConfigError::Validation("eta must be ≥ 0".into()));
        }
        if !(self.stack.wavelength.is_finite() && self.stack.wavelength > 0.0) {
            return Err(ConfigError::Validation("wavelength must be > 0".into()));
        }
        if !(self.beam.waist_in_wavelengths.is_finite() && self.beam.waist_in_wavelengths > 0.0) {
            return Err(ConfigError::Validation("waist_in_wavelengths must be > 0".into()));
        }
        let f = self.output.max_flagged_fraction;
        if !(0.0..=1.0).contains(&f) {
            return Err(ConfigError::Validation("max_flagged_fraction must lie in [0, 1]".into()));
        }
        self.scenario()?;
        self.sweep.validate()?;
        Ok(())
    }
}

// Partial form used for parsing; every key optional.

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    preset: Option<String>,
    medium: Option<RawMedium>,
    stack: Option<RawStack>,
    beam: Option<RawBeam>,
    sweep: Option<RawSweep>,
    output: Option<RawOutput>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMedium {
    gamma_b: Option<f64>,
    gamma_e: Option<f64>,
    eta: Option<f64>,
    fields: Option<[[f64; 2]; 4]>,
    couplings: Option<DirectCouplings>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStack {
    eps1: Option<[f64; 2]>,
    eps3: Option<[f64; 2]>,
    thickness: Option<f64>,
    wavelength: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBeam {
    waist_in_wavelengths: Option<f64>,
    slope_unit: Option<SlopeUnit>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    theta_deg: Option<AxisRange>,
    detuning: Option<AxisRange>,
    eta_list: Option<Vec<f64>>,
    amplitude_list: Option<Vec<[f64; 4]>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<PathBuf>,
    format: Option<OutputFormat>,
    manifest_header: Option<bool>,
    max_flagged_fraction: Option<f64>,
}

/// Parses config text, applying preset defaults. `preset_override` wins
/// over the file's `preset` key.
pub fn parse_config(text: &str, preset_override: Option<&str>) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.span().map_or(0, |s| text[..s.start.min(text.len())].matches('\n').count() + 1),
        message: e.message().to_string(),
    })?;
    let name = preset_override.or(raw.preset.as_deref()).unwrap_or(DEFAULT_PRESET);
    let mut cfg = RunConfig::preset(name)?;
    if let Some(m) = raw.medium {
        set(&mut cfg.medium.gamma_b, m.gamma_b);
        set(&mut cfg.medium.gamma_e, m.gamma_e);
        set(&mut cfg.medium.eta, m.eta);
        if m.fields.is_some() || m.couplings.is_some() {
            cfg.medium.fields = m.fields;
            cfg.medium.couplings = m.couplings;
        }
    }
    if let Some(s) = raw.stack {
        set(&mut cfg.stack.eps1, s.eps1);
        set(&mut cfg.stack.eps3, s.eps3);
        set(&mut cfg.stack.thickness, s.thickness);
        set(&mut cfg.stack.wavelength, s.wavelength);
    }
    if let Some(b) = raw.beam {
        set(&mut cfg.beam.waist_in_wavelengths, b.waist_in_wavelengths);
        set(&mut cfg.beam.slope_unit, b.slope_unit);
    }
    if let Some(s) = raw.sweep {
        set(&mut cfg.sweep.theta_deg, s.theta_deg);
        set(&mut cfg.sweep.detuning, s.detuning);
        if s.eta_list.is_some() {
            cfg.sweep.eta_list = s.eta_list;
        }
        if s.amplitude_list.is_some() {
            cfg.sweep.amplitude_list = s.amplitude_list;
        }
    }
    if let Some(o) = raw.output {
        if o.path.is_some() {
            cfg.output.path = o.path;
        }
        set(&mut cfg.output.format, o.format);
        set(&mut cfg.output.manifest_header, o.manifest_header);
        set(&mut cfg.output.max_flagged_fraction, o.max_flagged_fraction);
    }
    // re-normalize phases the same way the field constructor does
    if let Some(fields) = cfg.medium.fields.as_mut() {
        for f in fields.iter_mut() {
            if f[1].is_finite() {
                f[1] = crate::atomic_medium::ControlField::new(f[0].abs(), f[1])?.phase();
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
    parse_config(&text, None)
}

/// Fully populated TOML for `cfg`.
pub fn write_config(cfg: &RunConfig) -> String {
    toml::to_string(cfg).expect("RunConfig serializes to TOML")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_default_profile() {
        let cfg = parse_config("", None).unwrap();
        assert_eq!(cfg, RunConfig::preset("fig2-ctl").unwrap());
        assert_eq!(cfg.medium.eta, 0.1);
        assert_eq!(cfg.beam.waist_in_wavelengths, 50.0);
        assert_eq!(cfg.stack.thickness, 0.4e-6);
        assert_eq!(cfg.stack.wavelength, 780e-9);
    }

    #[test]
    fn negative_eta_is_rejected() {
        let err = parse_config("[medium]\neta = -0.1\n", None).unwrap_err();
        assert_eq!(err.to_string(), "eta must be ≥ 0");
    }

    #[test]
    fn lambda_preset() {
        let cfg = parse_config("preset = \"fig3-lambda\"", None).unwrap();
        let f = cfg.medium.fields.unwrap();
        assert_eq!(f[0], [0.5, std::f64::consts::PI]);
        assert_eq!(f[2][0], 0.7);
        let c = cfg.couplings().unwrap();
        assert!(c.alpha.norm() < 1e-15 && c.beta.norm() > 0.7);
    }

    #[test]
    fn parse_errors_carry_a_line() {
        match parse_config("preset = \"fig2-ctl\"\n[medium]\netaa = 1.0\n", None) {
            Err(ConfigError::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("etaa"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_config("[medium\n", None), Err(ConfigError::Parse { .. })));
    }

    #[test]
    fn both_coupling_sources_rejected() {
        let text =
            "[medium]\nfields = [[1,0],[1,0],[1,0],[1,0]]\ncouplings = { alpha = [1,0], beta = [0,0], omega = 1 }\n";
        assert!(matches!(parse_config(text, None), Err(ConfigError::Validation(_))));
    }

    #[test]
    fn direct_couplings_replace_fields() {
        let text = "[medium]\ncouplings = { alpha = [1.0, 0.0], beta = [0.0, 0.0], omega = 0.0 }\n";
        let cfg = parse_config(text, None).unwrap();
        assert!(cfg.medium.fields.is_none());
        assert!(cfg.scenario().unwrap().fields.is_none());
    }

    #[test]
    fn degenerate_fields_are_a_validation_error() {
        let text = "[medium]\nfields = [[1,0],[0,0],[0,0],[0,0]]\n";
        assert!(matches!(parse_config(text, None), Err(ConfigError::Validation(_))));
    }

    #[test]
    fn unknown_preset() {
        assert!(parse_config("", Some("fig9")).is_err());
    }

    #[test]
    fn write_then_load_round_trips() {
        for name in PRESETS {
            let mut cfg = RunConfig::preset(name).unwrap();
            cfg.sweep.eta_list = Some(vec![0.01, 0.2]);
            cfg.output.path = Some("out/data.csv".into());
            let back = parse_config(&write_config(&cfg), None).unwrap();
            assert_eq!(back, cfg);
        }
    }
}
