use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SystemConfig;

/// Quantity varied across a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "snr_db")]
    SnrDb,
    /// Position-error standard deviation in wavelengths.
    #[serde(rename = "sigma_pos")]
    SigmaPos,
}

impl SweepAxis {
    pub fn default_values(self) -> Vec<f64> {
        match self {
            SweepAxis::SnrDb => (0..=8).map(|i| 5.0 * i as f64).collect(),
            SweepAxis::SigmaPos => vec![0.01, 0.02, 0.05, 0.1],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::SnrDb => "snr_db",
            SweepAxis::SigmaPos => "sigma_pos",
        }
    }

    /// Copy of `system` with the swept quantity set to `value`.
    pub fn apply(self, system: &SystemConfig, value: f64) -> SystemConfig {
        let mut s = system.clone();
        match self {
            SweepAxis::SnrDb => s.snr_db = value,
            SweepAxis::SigmaPos => s.sigma_pos = value,
        }
        s
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Estimation pipelines the harness can run. The declaration order is the
/// canonical output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EstimatorKind {
    /// LS filter for `Θ` using the realized motion matrix.
    #[serde(rename = "ls-ideal-T")]
    LsIdealT,
    /// LS filter plus KRF using the realized motion matrix.
    #[serde(rename = "krf-ideal-T")]
    KrfIdealT,
    /// LS filter for `Θ` using the commanded motion matrix.
    #[serde(rename = "ls-mismatched-T")]
    LsMismatchedT,
    /// LS filter plus KRF using the commanded motion matrix.
    #[serde(rename = "krf-mismatched-T")]
    KrfMismatchedT,
    /// Joint estimation of `T`, `G`, `H` from `Ẑ` by three-factor KRF.
    #[serde(rename = "joint-TGH")]
    JointTgh,
    /// Fixed-element surface with `J K` DFT phase configurations.
    #[serde(rename = "static-ris-baseline")]
    StaticRisBaseline,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 6] = [
        EstimatorKind::LsIdealT,
        EstimatorKind::KrfIdealT,
        EstimatorKind::LsMismatchedT,
        EstimatorKind::KrfMismatchedT,
        EstimatorKind::JointTgh,
        EstimatorKind::StaticRisBaseline,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            EstimatorKind::LsIdealT => "ls-ideal-T",
            EstimatorKind::KrfIdealT => "krf-ideal-T",
            EstimatorKind::LsMismatchedT => "ls-mismatched-T",
            EstimatorKind::KrfMismatchedT => "krf-mismatched-T",
            EstimatorKind::JointTgh => "joint-TGH",
            EstimatorKind::StaticRisBaseline => "static-ris-baseline",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperimentConfig {
    #[serde(default)]
    system: SystemConfig,
    sweep_axis: SweepAxis,
    sweep_values: Option<Vec<f64>>,
    estimators: Option<Vec<EstimatorKind>>,
    output_path: Option<PathBuf>,
}

/// A Monte-Carlo sweep. In JSON, `sweep_values` defaults to the axis grid
/// (`0:5:40` dB or `{0.01, 0.02, 0.05, 0.1}` wavelengths), `estimators` to
/// all six and `output_path` to `results.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub system: SystemConfig,
    pub sweep_axis: SweepAxis,
    pub sweep_values: Vec<f64>,
    pub estimators: Vec<EstimatorKind>,
    pub output_path: PathBuf,
}

impl ExperimentConfig {
    /// All estimators over the default grid of `axis`.
    pub fn new(system: SystemConfig, axis: SweepAxis) -> Self {
        Self {
            system,
            sweep_axis: axis,
            sweep_values: axis.default_values(),
            estimators: EstimatorKind::ALL.to_vec(),
            output_path: PathBuf::from("results.csv"),
        }
    }

    /// Parses and validates.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawExperimentConfig = serde_json::from_str(text)?;
        let cfg = Self {
            sweep_values: raw
                .sweep_values
                .unwrap_or_else(|| raw.sweep_axis.default_values()),
            estimators: raw
                .estimators
                .unwrap_or_else(|| EstimatorKind::ALL.to_vec()),
            output_path: raw
                .output_path
                .unwrap_or_else(|| PathBuf::from("results.csv")),
            system: raw.system,
            sweep_axis: raw.sweep_axis,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.system.validate()?;
        if self.sweep_values.is_empty() {
            return Err(Error::config("sweep_values must not be empty"));
        }
        if let Some(v) = self.sweep_values.iter().find(|v| !v.is_finite()) {
            return Err(Error::config(format!("sweep value {v} is not finite")));
        }
        if self.sweep_values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("sweep_values must be strictly increasing"));
        }
        if self.sweep_axis == SweepAxis::SigmaPos && self.sweep_values[0] < 0.0 {
            return Err(Error::config("sigma_pos sweep values must be non-negative"));
        }
        if self.estimators.is_empty() {
            return Err(Error::config("at least one estimator is required"));
        }
        let unique: BTreeSet<_> = self.estimators.iter().collect();
        if unique.len() != self.estimators.len() {
            return Err(Error::config("estimators must not repeat"));
        }
        Ok(())
    }
}
