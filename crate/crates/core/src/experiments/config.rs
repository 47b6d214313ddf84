use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::drift::DriftPreset;
use crate::error::{Error, Result};
use crate::solvers::Strategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Cover,
    Control,
    WassersteinCurve,
    BoundsCurve,
    Validate,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Cover => "cover",
            ExperimentKind::Control => "control",
            ExperimentKind::WassersteinCurve => "wasserstein_curve",
            ExperimentKind::BoundsCurve => "bounds_curve",
            ExperimentKind::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidationMode {
    /// Stationary scenarios, `N` from the explicit sample-size bound, no radius.
    Static,
    /// Drift preset scenarios with radius `validation_r0`.
    Drifted,
}

impl FromStr for ValidationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "static" => Ok(Self::Static),
            "drifted" => Ok(Self::Drifted),
            other => Err(Error::Config(format!("unknown validation mode `{other}`"))),
        }
    }
}

/// Every knob of every experiment. Unset keys take the defaults below.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// Number of covering scenarios.
    pub n: usize,
    pub epsilon: f64,
    pub beta: f64,
    /// Decision dimension of the covering problem.
    pub complexity: usize,
    pub r0: Vec<f64>,
    /// `ramp`, `equal_sigma` or `static`.
    pub preset: String,
    /// Overrides `preset` with a drift preset file.
    pub preset_file: Option<PathBuf>,

    pub horizon: usize,
    pub control_n: usize,
    pub inputs: Vec<f64>,
    pub entry_std: f64,
    pub strategy: String,
    pub schedule_beta: f64,
    /// `(ρ, r0)` pairs, one ε(k) curve each.
    pub rho_r0: Vec<[f64; 2]>,

    pub repetitions: usize,
    pub samples: u64,
    pub validation_mode: ValidationMode,
    pub validation_r0: f64,

    pub r0_grid: Vec<f64>,
    pub eps_grid: Vec<f64>,
    pub quad_tol: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            n: 309,
            epsilon: 0.1,
            beta: 1e-4,
            complexity: 2,
            r0: vec![1.8, 2.0, 2.2, 2.4],
            preset: "ramp".into(),
            preset_file: None,
            horizon: 8,
            control_n: 1000,
            inputs: (-5..=5).map(f64::from).collect(),
            entry_std: 0.02,
            strategy: "branch_and_bound".into(),
            schedule_beta: 1e-2,
            rho_r0: vec![[0.0, 1.0], [0.01, 1.0], [0.05, 1.0]],
            repetitions: 500,
            samples: 20_000,
            validation_mode: ValidationMode::Drifted,
            validation_r0: 2.0,
            r0_grid: (0..=12).map(|k| 1.8 + 0.05 * f64::from(k)).collect(),
            eps_grid: vec![0.02, 0.05, 0.1, 0.15, 0.2, 0.3],
            quad_tol: 1e-10,
        }
    }
}

impl Params {
    /// `T = 4` with exhaustive search: every control result can be checked
    /// against full enumeration.
    pub fn desk_scale(mut self) -> Self {
        self.horizon = 4;
        self.strategy = "exhaustive".into();
        self
    }

    pub fn strategy(&self) -> Result<Strategy> {
        self.strategy.parse()
    }

    /// Drift preset over `n` steps, from `preset_file` when given.
    pub fn drift_preset(&self, n: usize) -> Result<DriftPreset> {
        match &self.preset_file {
            Some(path) => {
                let preset = DriftPreset::load(path)?;
                if preset.family.n_steps() != n {
                    return Err(Error::Config(format!(
                        "preset file {} defines N = {}, run needs N = {n}",
                        path.display(),
                        preset.family.n_steps()
                    )));
                }
                Ok(preset)
            }
            None => DriftPreset::named(&self.preset, n),
        }
    }

    /// Applies `key=value`; list values are comma separated, pairs use `:`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |e: &dyn std::fmt::Display| Error::Config(format!("{key}={value}: {e}"));
        fn num<T: FromStr>(v: &str) -> std::result::Result<T, T::Err> {
            v.trim().parse()
        }
        fn list(v: &str) -> std::result::Result<Vec<f64>, std::num::ParseFloatError> {
            v.split(',').filter(|s| !s.trim().is_empty()).map(|s| s.trim().parse()).collect()
        }
        match key {
            "n" => self.n = num(value).map_err(|e| bad(&e))?,
            "epsilon" => self.epsilon = num(value).map_err(|e| bad(&e))?,
            "beta" => self.beta = num(value).map_err(|e| bad(&e))?,
            "complexity" => self.complexity = num(value).map_err(|e| bad(&e))?,
            "r0" => self.r0 = list(value).map_err(|e| bad(&e))?,
            "preset" => self.preset = value.to_string(),
            "preset_file" => self.preset_file = Some(PathBuf::from(value)),
            "horizon" => self.horizon = num(value).map_err(|e| bad(&e))?,
            "control_n" => self.control_n = num(value).map_err(|e| bad(&e))?,
            "inputs" => self.inputs = list(value).map_err(|e| bad(&e))?,
            "entry_std" => self.entry_std = num(value).map_err(|e| bad(&e))?,
            "strategy" => {
                value.parse::<Strategy>()?;
                self.strategy = value.to_string();
            }
            "schedule_beta" => self.schedule_beta = num(value).map_err(|e| bad(&e))?,
            "rho_r0" => {
                self.rho_r0 = value
                    .split(',')
                    .map(|pair| {
                        let (rho, r0) = pair.split_once(':').ok_or_else(|| bad(&"pairs are rho:r0"))?;
                        Ok([num(rho).map_err(|e| bad(&e))?, num(r0).map_err(|e| bad(&e))?])
                    })
                    .collect::<Result<_>>()?
            }
            "repetitions" => self.repetitions = num(value).map_err(|e| bad(&e))?,
            "samples" => self.samples = num(value).map_err(|e| bad(&e))?,
            "validation_mode" => self.validation_mode = value.parse()?,
            "validation_r0" => self.validation_r0 = num(value).map_err(|e| bad(&e))?,
            "r0_grid" => self.r0_grid = list(value).map_err(|e| bad(&e))?,
            "eps_grid" => self.eps_grid = list(value).map_err(|e| bad(&e))?,
            "quad_tol" => self.quad_tol = num(value).map_err(|e| bad(&e))?,
            other => return Err(Error::Config(format!("unknown parameter `{other}`"))),
        }
        Ok(())
    }
}

/// A fully specified run: `(experiment, seed, params)` determines the output.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub params: Params,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, seed: u64) -> Self {
        Self { experiment, seed, params: Params::default() }
    }

    pub fn with_params(mut self, params: Params) -> Self {
        self.params = params;
        self
    }

    /// Reads a TOML key-value file. `experiment` in the file must agree
    /// with `experiment` when both are given.
    pub fn from_toml(text: &str, experiment: Option<ExperimentKind>) -> Result<Self> {
        let config_err = |e: &dyn std::fmt::Display| Error::Config(e.to_string());
        let mut table: toml::Table = toml::from_str(text).map_err(|e| config_err(&e))?;
        let file_kind = match table.remove("experiment") {
            Some(v) => Some(ExperimentKind::deserialize(v).map_err(|e| config_err(&e))?),
            None => None,
        };
        let seed = match table.remove("seed") {
            Some(v) => u64::deserialize(v).map_err(|e| config_err(&e))?,
            None => 0,
        };
        let params = Params::deserialize(table).map_err(|e| config_err(&e))?;
        let kind = match (file_kind, experiment) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Config(format!(
                    "config is for `{}` but `{}` was requested",
                    a.as_str(),
                    b.as_str()
                )))
            }
            (Some(k), _) | (None, Some(k)) => k,
            (None, None) => return Err(Error::Config("no experiment given".into())),
        };
        Ok(Self { experiment: kind, seed, params })
    }

    pub fn load(path: &Path, experiment: Option<ExperimentKind>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?, experiment)
    }
}
