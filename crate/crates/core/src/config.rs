//! Experiment configuration files.
//!
//! A config is a TOML document with a mandatory `[params]` table and one
//! optional table per command. `--set section.key=value` overrides are
//! applied to the parsed document before it is checked, so they go through
//! the same validation as file values.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::basins::{basin_integrator_default, SweepParam};
use crate::dynamics::IntegratorConfig;
use crate::equilibria::DEFAULT_STABILITY_TOL;
use crate::params::{GameParams, ParamError, RawParams};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(String),
    #[error("invalid override {0:?}: expected key=value with a dotted key such as params.alpha=0.2")]
    Override(String),
    #[error("invalid parameter: {0}")]
    Params(#[from] ParamError),
    #[error("invalid config field {field}: {reason}")]
    Field { field: &'static str, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub params: RawParams,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub equilibria: EquilibriaOptions,
    #[serde(default)]
    pub trajectory: TrajectoryOptions,
    #[serde(default)]
    pub portrait: PortraitOptions,
    #[serde(default)]
    pub regime_map: Option<RegimeMapOptions>,
    #[serde(default)]
    pub basin: BasinOptions,
    #[serde(default)]
    pub mc: McOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EquilibriaOptions {
    pub tol: f64,
}

impl Default for EquilibriaOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_STABILITY_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrajectoryOptions {
    /// Initial `(x_i, x_t)` pairs.
    pub starts: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PortraitOptions {
    /// Points per axis, edges included.
    pub grid: u32,
}

impl Default for PortraitOptions {
    fn default() -> Self {
        Self { grid: 21 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimeMapOptions {
    pub lambda_range: [f64; 2],
    pub alpha_range: [f64; 2],
    /// Points per axis as `[lambda, alpha]`.
    pub resolution: [usize; 2],
    #[serde(default = "default_regime_tol")]
    pub tol: f64,
}

fn default_regime_tol() -> f64 {
    1e-9
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BasinOptions {
    pub grid: u32,
    /// Swept parameter; when absent a single basin at `params` is computed.
    pub axis: Option<SweepParam>,
    pub values: Vec<f64>,
    pub integrator: IntegratorConfig,
}

impl Default for BasinOptions {
    fn default() -> Self {
        Self {
            grid: 101,
            axis: None,
            values: Vec::new(),
            integrator: basin_integrator_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McOptions {
    pub samples: u64,
    pub states: Vec<[f64; 2]>,
    pub seed: u64,
}

impl Default for McOptions {
    fn default() -> Self {
        Self {
            samples: 100_000,
            states: Vec::new(),
            seed: 0,
        }
    }
}

fn parse_override_value(raw: &str) -> toml::Value {
    // Anything that is not a TOML literal is taken as a bare string.
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

fn apply_override(doc: &mut toml::Table, entry_text: &str) -> Result<(), ConfigError> {
    let (key, value) = entry_text
        .split_once('=')
        .ok_or_else(|| ConfigError::Override(entry_text.to_string()))?;
    let parts: Vec<&str> = key.trim().split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(ConfigError::Override(entry_text.to_string()));
    }
    let (last, parents) = parts.split_last().expect("split yields at least one part");
    let mut table = doc;
    for p in parents {
        let entry = table
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| ConfigError::Override(entry_text.to_string()))?;
    }
    table.insert(last.to_string(), parse_override_value(value.trim()));
    Ok(())
}

impl ExperimentConfig {
    /// Parse TOML text, apply overrides in order, and validate.
    pub fn from_toml_str(text: &str, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut doc: toml::Table = toml::from_str(text).map_err(|e| ConfigError::Parse(e.message().to_string()))?;
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        let cfg: ExperimentConfig = toml::Value::Table(doc)
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError::Parse(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text, overrides)
    }

    pub fn game_params(&self) -> Result<GameParams, ParamError> {
        GameParams::new(self.params)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        self.game_params()?;
        self.integrator.validate().map_err(|e| ConfigError::Field {
            field: "integrator",
            reason: e.to_string(),
        })?;
        self.basin.integrator.validate().map_err(|e| ConfigError::Field {
            field: "basin.integrator",
            reason: e.to_string(),
        })?;
        if self.portrait.grid < 2 {
            return Err(ConfigError::Field {
                field: "portrait.grid",
                reason: "need at least 2 points per axis".into(),
            });
        }
        if self.basin.grid == 0 {
            return Err(ConfigError::Field {
                field: "basin.grid",
                reason: "must be positive".into(),
            });
        }
        if self.mc.samples < 2 {
            return Err(ConfigError::Field {
                field: "mc.samples",
                reason: "need at least 2 samples for a standard error".into(),
            });
        }
        if let Some(rm) = &self.regime_map {
            if rm.resolution.iter().any(|&r| r < 1) {
                return Err(ConfigError::Field {
                    field: "regime_map.resolution",
                    reason: "must be positive on both axes".into(),
                });
            }
        }
        Ok(())
    }
}
