//! Run configuration: a strict TOML schema. Unknown keys anywhere are
//! rejected before any computation starts.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: String,
    #[serde(default)]
    pub seed: u64,
    /// Output directory; falls back to ELASTICA_OUT, then the current
    /// directory. Not echoed into the summary so that identical
    /// (config, seed) pairs produce identical bytes wherever they land.
    #[serde(default, skip_serializing)]
    pub output: Option<PathBuf>,
    pub grid: GridConfig,
    #[serde(default)]
    pub constants: Constants,
    #[serde(default)]
    pub params: toml::Table,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n_sites: usize,
    pub length: f64,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct Constants {
    pub c_s: f64,
    pub g: f64,
    pub m_star: f64,
    pub m: f64,
    pub mu_b: f64,
    pub rho: f64,
    /// Time-sector coupling; defaults to c_s * g when absent.
    pub g0: Option<f64>,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            c_s: 1.0,
            g: 1.0,
            m_star: 1.0,
            m: 1.0,
            mu_b: 1.0,
            rho: 1.0,
            g0: None,
        }
    }
}

impl Constants {
    pub fn g0(&self) -> f64 {
        self.g0.unwrap_or(self.c_s * self.g)
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("config parse error: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_toml(&text)
    }

    /// Deserialize the experiment-specific parameter table into a typed,
    /// strict struct.
    pub fn typed_params<T: serde::de::DeserializeOwned>(&self) -> Result<T, CliError> {
        T::deserialize(self.params.clone())
            .map_err(|e| CliError::Config(format!("params for '{}': {e}", self.experiment)))
    }
}

fn default_modes() -> Vec<i64> {
    vec![1, 2, 3, 4]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DispersionParams {
    pub modes: Vec<i64>,
    pub t_total: f64,
    pub cfl: f64,
    pub snapshot_every: usize,
}

impl Default for DispersionParams {
    fn default() -> Self {
        Self {
            modes: default_modes(),
            t_total: 40.0,
            cfl: 0.5,
            snapshot_every: 2,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GaugeCheckParams {
    pub epsilons: Vec<f64>,
}

impl Default for GaugeCheckParams {
    fn default() -> Self {
        Self {
            epsilons: vec![1e-2, 5e-3, 2.5e-3],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuantaParams {
    pub modes: Vec<i64>,
    pub n_max: u32,
    pub n_total_cap: Option<u32>,
}

impl Default for QuantaParams {
    fn default() -> Self {
        Self {
            modes: vec![1, -1, 2],
            n_max: 3,
            n_total_cap: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EphRateParams {
    /// Inclusive phonon mode index window for the emission band.
    pub mode_lo: i64,
    pub mode_hi: i64,
    /// Initial electron momentum index.
    pub k0_n: i64,
    /// Final-state electron momentum window (inclusive).
    pub electron_lo: i64,
    pub electron_hi: i64,
    /// Smearing width as a multiple of the mean final-state spacing.
    pub eta_factor: f64,
    /// Two-point slope window for the exact short-time rate.
    pub t1: f64,
    pub t2: f64,
}

impl Default for EphRateParams {
    fn default() -> Self {
        Self {
            mode_lo: 75,
            mode_hi: 97,
            k0_n: 48,
            electron_lo: -49,
            electron_hi: -27,
            eta_factor: 2.0,
            t1: 10.0,
            t2: 30.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EphShiftParams {
    pub modes: Vec<i64>,
    pub n_k: i64,
    pub n_max: u32,
    pub n_total_cap: Option<u32>,
    pub init_k_n: i64,
    pub couplings: Vec<f64>,
}

impl Default for EphShiftParams {
    fn default() -> Self {
        Self {
            modes: vec![1, -1, 3],
            n_k: 4,
            n_max: 2,
            n_total_cap: Some(2),
            init_k_n: 2,
            couplings: vec![0.08, 0.04, 0.02],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpinSelectionParams {
    pub mode_n: i64,
    pub e_field: [f64; 3],
    /// Upper triangle of the strain tensor: xx, xy, xz, yy, yz, zz.
    pub strain: [f64; 6],
}

impl Default for SpinSelectionParams {
    fn default() -> Self {
        Self {
            mode_n: 2,
            e_field: [0.0, 0.0, 1.0],
            strain: [0.4, 0.1, 0.0, 0.0, 0.2, 0.0],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RelaxationRunParams {
    pub lambda: f64,
    pub e_z: f64,
    pub r_amplitude: f64,
    pub delta: f64,
    pub tau: f64,
    pub dt: f64,
    pub n_steps: usize,
    pub n_realizations: usize,
    pub record_every: usize,
}

impl Default for RelaxationRunParams {
    fn default() -> Self {
        Self {
            lambda: 0.4,
            e_z: 1.0,
            r_amplitude: 1.0,
            delta: 1.0,
            tau: 0.5,
            dt: 0.02,
            n_steps: 2000,
            n_realizations: 2000,
            record_every: 10,
        }
    }
}
