use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar parameters of one FRIS uplink scenario.
///
/// JSON keys use the conventional symbols (`M`, `Q`, `M_r`, `T_s`, `K`, `J`,
/// `N`); any omitted key takes its value from [`SystemConfig::default`],
/// which is the reference scenario `{M, Q, M_r, T_s, K} = {12, 4, 10, 4, 4}`
/// with `J = 12`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    /// Number of fluid elements `M`.
    #[serde(rename = "M")]
    pub elements: usize,
    /// Number of single-antenna users `Q`.
    #[serde(rename = "Q")]
    pub users: usize,
    /// Base-station antennas `M_r`.
    #[serde(rename = "M_r")]
    pub bs_antennas: usize,
    /// Pilot symbols per block `T_s`.
    #[serde(rename = "T_s")]
    pub symbols_per_block: usize,
    /// Blocks per sub-frame `K`.
    #[serde(rename = "K")]
    pub blocks: usize,
    /// Sub-frames `J`.
    #[serde(rename = "J")]
    pub subframes: usize,
    /// Carrier wavelength in meters.
    pub wavelength: f64,
    /// Preset positions per element `N`; must be a perfect square.
    #[serde(rename = "N")]
    pub preset_positions: usize,
    /// Side of the square surface in meters.
    pub area_side: f64,
    pub snr_db: f64,
    /// Position-error standard deviation, in wavelengths.
    pub sigma_pos: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            elements: 12,
            users: 4,
            bs_antennas: 10,
            symbols_per_block: 4,
            blocks: 4,
            subframes: 12,
            wavelength: 0.01,
            preset_positions: 16,
            area_side: 0.1,
            snr_db: 30.0,
            sigma_pos: 0.05,
            trials: 200,
            seed: 1,
        }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("M", self.elements),
            ("Q", self.users),
            ("M_r", self.bs_antennas),
            ("T_s", self.symbols_per_block),
            ("K", self.blocks),
            ("J", self.subframes),
            ("N", self.preset_positions),
            ("trials", self.trials),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(Error::config(format!("{name} must be at least 1")));
        }
        if self.symbols_per_block < self.users {
            return Err(Error::config(format!(
                "T_s = {} < Q = {}: pilots cannot be orthogonal",
                self.symbols_per_block, self.users
            )));
        }
        if self.subframes < self.elements {
            return Err(Error::config(format!(
                "J = {} < M = {}: phase matrix cannot be semi-unitary",
                self.subframes, self.elements
            )));
        }
        if self.preset_positions < self.blocks {
            return Err(Error::config(format!(
                "N = {} < K = {}: not enough preset positions for distinct moves",
                self.preset_positions, self.blocks
            )));
        }
        if lattice_side(self.preset_positions).is_none() {
            return Err(Error::config(format!(
                "N = {} is not a perfect square",
                self.preset_positions
            )));
        }
        if !(self.wavelength.is_finite() && self.wavelength > 0.0) {
            return Err(Error::config("wavelength must be positive and finite"));
        }
        if !(self.area_side.is_finite() && self.area_side > 0.0) {
            return Err(Error::config("area_side must be positive and finite"));
        }
        if !(self.sigma_pos.is_finite() && self.sigma_pos >= 0.0) {
            return Err(Error::config("sigma_pos must be finite and non-negative"));
        }
        if self.snr_db.is_nan() || self.snr_db == f64::NEG_INFINITY {
            return Err(Error::config(
                "snr_db must be a number (+inf disables noise)",
            ));
        }
        Ok(())
    }

    /// Pre-filter noise variance `σ_v² = M Q 10^(-SNR/10)`; the SNR is the
    /// ratio of the average noiseless per-entry received power (`M Q` for
    /// unit-variance channels) to the noise variance. `+inf` gives zero.
    pub fn noise_variance(&self, snr_db: f64) -> f64 {
        if snr_db == f64::INFINITY {
            0.0
        } else {
            (self.elements * self.users) as f64 * 10f64.powf(-snr_db / 10.0)
        }
    }
}

pub(crate) fn lattice_side(n: usize) -> Option<usize> {
    let s = (n as f64).sqrt().round() as usize;
    (s * s == n).then_some(s)
}
