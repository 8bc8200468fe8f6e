//! Scan configuration documents and their resolution into typed parameters.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::beams::{BeamParams1D, BeamParams2D, GsmParams};
use crate::extended::{parse_extended, Extended};
use crate::family::{AgsmParams, CurvParams, TgsmParams};
use crate::witness::RotationAngle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Coherent1d,
    Gsm,
    Elliptic2d,
    Tgsm,
    Curv,
    Agsm,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Coherent1d,
        Family::Gsm,
        Family::Elliptic2d,
        Family::Tgsm,
        Family::Curv,
        Family::Agsm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Coherent1d => "coherent1d",
            Family::Gsm => "gsm",
            Family::Elliptic2d => "elliptic2d",
            Family::Tgsm => "tgsm",
            Family::Curv => "curv",
            Family::Agsm => "agsm",
        }
    }

    /// Canonical parameter names with their defaults; `None` marks a
    /// required parameter.
    pub fn parameters(self) -> &'static [(&'static str, Option<Extended>)] {
        const ONE: Option<Extended> = Some(Extended::Finite(1.0));
        const ZERO: Option<Extended> = Some(Extended::Finite(0.0));
        const INF: Option<Extended> = Some(Extended::Infinite);
        match self {
            Family::Coherent1d => &[("intensity", ONE), ("width", None), ("lambda_bar", ONE)],
            Family::Gsm => &[
                ("intensity", ONE),
                ("width", None),
                ("coherence_length", INF),
                ("lambda_bar", ONE),
            ],
            Family::Elliptic2d => &[
                ("intensity_x", ONE),
                ("intensity_y", ONE),
                ("width_x", None),
                ("width_y", None),
                ("theta", ZERO),
                ("lambda_bar", ONE),
            ],
            Family::Tgsm | Family::Curv => &[
                ("intensity", ONE),
                ("width", None),
                ("coherence_length", INF),
                ("curvature_radius", INF),
                ("twist", ZERO),
                ("lambda_bar", ONE),
            ],
            Family::Agsm => &[
                ("intensity", ONE),
                ("l11", None),
                ("l12", ZERO),
                ("l22", None),
                ("m11", ZERO),
                ("m12", ZERO),
                ("m22", ZERO),
                ("k11", ZERO),
                ("k12", ZERO),
                ("k21", ZERO),
                ("k22", ZERO),
                ("lambda_bar", ONE),
            ],
        }
    }

    fn has_parameter(self, name: &str) -> bool {
        self.parameters().iter().any(|(n, _)| *n == name)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Family::ALL.iter().map(|f| f.name()).collect();
                CliError::Config(format!(
                    "family: unknown family {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

const ALIASES: &[(&str, &str)] = &[
    ("I", "intensity"),
    ("w", "width"),
    ("delta", "coherence_length"),
    ("R", "curvature_radius"),
    ("u", "twist"),
    ("lambda", "lambda_bar"),
    ("w1", "width_x"),
    ("w2", "width_y"),
    ("I1", "intensity_x"),
    ("I2", "intensity_y"),
];

/// Maps a short alias such as `w` or `delta` onto its canonical name.
pub fn canonical_name(name: &str) -> &str {
    ALIASES
        .iter()
        .find(|(alias, _)| *alias == name)
        .map_or(name, |(_, canonical)| canonical)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(CliError::Config(format!(
                "format: expected csv or json, got {s:?}"
            ))),
        }
    }
}

/// Evenly spaced samples `start + (stop - start) i / (steps - 1)`; a single
/// step yields `start` alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let span = self.stop - self.start;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| self.start + span * i as f64 / last)
            .collect()
    }

    fn validate(&self, field: &str) -> Result<(), CliError> {
        if self.steps == 0 {
            return Err(CliError::Config(format!(
                "{field}: steps must be at least 1"
            )));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::Config(format!("{field}: bounds must be finite")));
        }
        Ok(())
    }
}

impl FromStr for Range {
    type Err = CliError;

    /// `start:stop:steps`.
    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Config(format!("range {s:?}: expected start:stop:steps"));
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, steps] = parts.as_slice() else {
            return Err(bad());
        };
        Ok(Range {
            start: start.trim().parse().map_err(|_| bad())?,
            stop: stop.trim().parse().map_err(|_| bad())?,
            steps: steps.trim().parse().map_err(|_| bad())?,
        })
    }
}

/// A complete, reproducible description of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub family: Family,
    #[serde(default)]
    pub parameters: BTreeMap<String, Extended>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_axis: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_range: Option<Range>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_range: Option<Range>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_format: Option<OutputFormat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub draws: Option<usize>,
}

impl ScanConfig {
    pub fn new(family: Family) -> Self {
        ScanConfig {
            family,
            parameters: BTreeMap::new(),
            scan_axis: None,
            scan_range: None,
            z_range: None,
            output_path: None,
            output_format: None,
            seed: None,
            draws: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let mut config: ScanConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))?;
        config.parameters = std::mem::take(&mut config.parameters)
            .into_iter()
            .map(|(k, v)| (canonical_name(&k).to_string(), v))
            .collect();
        config.scan_axis = config.scan_axis.map(|a| canonical_name(&a).to_string());
        Ok(config)
    }

    /// Sets a parameter from `name=value` text.
    pub fn set_parameter(&mut self, assignment: &str) -> Result<(), CliError> {
        let (name, value) = assignment.split_once('=').ok_or_else(|| {
            CliError::Config(format!("param {assignment:?}: expected name=value"))
        })?;
        let name = canonical_name(name.trim());
        let value = parse_extended(value.trim()).ok_or_else(|| {
            CliError::Config(format!("{name}: cannot parse {value:?} as a number or inf"))
        })?;
        self.parameters.insert(name.to_string(), value);
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for name in self.parameters.keys() {
            if !self.family.has_parameter(name) {
                return Err(CliError::Config(format!(
                    "{name}: not a parameter of family {}",
                    self.family
                )));
            }
        }
        match (&self.scan_axis, &self.scan_range) {
            (Some(axis), Some(range)) => {
                if !self.family.has_parameter(axis) {
                    return Err(CliError::Config(format!(
                        "scan_axis: {axis} is not a parameter of family {}",
                        self.family
                    )));
                }
                range.validate("scan_range")?;
            }
            (Some(_), None) => {
                return Err(CliError::Config(
                    "scan_range: required with scan_axis".into(),
                ))
            }
            (None, Some(_)) => {
                return Err(CliError::Config(
                    "scan_axis: required with scan_range".into(),
                ))
            }
            (None, None) => {}
        }
        if let Some(z) = &self.z_range {
            z.validate("z_range")?;
        }
        // Random draws replace the parameters entirely.
        let drawn = self.seed.is_some();
        for (name, default) in self.family.parameters() {
            if drawn {
                break;
            }
            let scanned = self.scan_axis.as_deref() == Some(*name);
            if default.is_none() && !scanned && !self.parameters.contains_key(*name) {
                return Err(CliError::Config(format!(
                    "{name}: required for family {}",
                    self.family
                )));
            }
        }
        Ok(())
    }

    /// The scan values, or a single `None` without a scan.
    pub fn scan_points(&self) -> Vec<Option<f64>> {
        match &self.scan_range {
            Some(r) if self.scan_axis.is_some() => r.values().into_iter().map(Some).collect(),
            _ => vec![None],
        }
    }

    /// Resolved parameters at one scan point.
    pub fn resolve(&self, scan_value: Option<f64>) -> Result<FamilyParams, CliError> {
        let mut values = self.parameters.clone();
        if let (Some(axis), Some(v)) = (&self.scan_axis, scan_value) {
            values.insert(axis.clone(), Extended::Finite(v));
        }
        FamilyParams::build(self.family, &values)
    }
}

/// Typed parameters of any supported family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParams {
    Coherent1d(BeamParams1D),
    Gsm(GsmParams),
    Elliptic2d(BeamParams2D, RotationAngle),
    Tgsm(TgsmParams),
    Curv(CurvParams),
    Agsm(AgsmParams),
}

struct Lookup<'a> {
    family: Family,
    values: &'a BTreeMap<String, Extended>,
}

impl Lookup<'_> {
    fn extended(&self, name: &str) -> Result<Extended, CliError> {
        if let Some(v) = self.values.get(name) {
            return Ok(*v);
        }
        self.family
            .parameters()
            .iter()
            .find(|(n, _)| *n == name)
            .and_then(|(_, d)| *d)
            .ok_or_else(|| CliError::Config(format!("{name}: required for family {}", self.family)))
    }

    fn finite(&self, name: &str) -> Result<f64, CliError> {
        match self.extended(name)? {
            Extended::Finite(v) => Ok(v),
            Extended::Infinite => Err(CliError::Config(format!("{name}: must be finite"))),
        }
    }
}

impl FamilyParams {
    pub fn build(family: Family, values: &BTreeMap<String, Extended>) -> Result<Self, CliError> {
        let g = Lookup { family, values };
        let params = match family {
            Family::Coherent1d => FamilyParams::Coherent1d(BeamParams1D::new(
                g.finite("intensity")?,
                g.finite("width")?,
                g.finite("lambda_bar")?,
            )?),
            Family::Gsm => FamilyParams::Gsm(GsmParams::new(
                g.finite("intensity")?,
                g.finite("width")?,
                g.extended("coherence_length")?,
                g.finite("lambda_bar")?,
            )?),
            Family::Elliptic2d => FamilyParams::Elliptic2d(
                BeamParams2D::new(
                    g.finite("intensity_x")?,
                    g.finite("intensity_y")?,
                    g.finite("width_x")?,
                    g.finite("width_y")?,
                    g.finite("lambda_bar")?,
                )?,
                RotationAngle::new(g.finite("theta")?),
            ),
            Family::Tgsm => FamilyParams::Tgsm(TgsmParams::new(
                g.finite("intensity")?,
                g.finite("width")?,
                g.extended("coherence_length")?,
                g.extended("curvature_radius")?,
                g.finite("twist")?,
                g.finite("lambda_bar")?,
            )?),
            Family::Curv => FamilyParams::Curv(CurvParams::new(
                g.finite("intensity")?,
                g.finite("width")?,
                g.extended("coherence_length")?,
                g.extended("curvature_radius")?,
                g.finite("twist")?,
                g.finite("lambda_bar")?,
            )?),
            Family::Agsm => {
                let l12 = g.finite("l12")?;
                let m12 = g.finite("m12")?;
                FamilyParams::Agsm(
                    AgsmParams::new(
                        g.finite("intensity")?,
                        Matrix2::new(g.finite("l11")?, l12, l12, g.finite("l22")?),
                        Matrix2::new(g.finite("m11")?, m12, m12, g.finite("m22")?),
                        Matrix2::new(
                            g.finite("k11")?,
                            g.finite("k12")?,
                            g.finite("k21")?,
                            g.finite("k22")?,
                        ),
                        g.finite("lambda_bar")?,
                    )
                    .map_err(|e| CliError::Config(e.to_string()))?,
                )
            }
        };
        Ok(params)
    }

    pub fn family(&self) -> Family {
        match self {
            FamilyParams::Coherent1d(_) => Family::Coherent1d,
            FamilyParams::Gsm(_) => Family::Gsm,
            FamilyParams::Elliptic2d(..) => Family::Elliptic2d,
            FamilyParams::Tgsm(_) => Family::Tgsm,
            FamilyParams::Curv(_) => Family::Curv,
            FamilyParams::Agsm(_) => Family::Agsm,
        }
    }

    /// The parameters as an AGSM beam, for the families that have one.
    pub fn to_agsm(&self) -> Option<AgsmParams> {
        match self {
            FamilyParams::Tgsm(p) => Some(p.to_agsm()),
            FamilyParams::Curv(p) => Some(p.to_agsm()),
            FamilyParams::Agsm(p) => Some(*p),
            _ => None,
        }
    }
}
