//! End-to-end experiments producing CSV tables.
//!
//! Each run is a pure function of [`ExperimentConfig`]: the same
//! experiment, seed and parameters give byte-identical tables.

pub mod config;
pub mod table;

mod control;
mod cover;
mod curves;
mod validate;

pub use config::{ExperimentConfig, ExperimentKind, Params, ValidationMode};
pub use control::{control_report, run_control_experiment, ControlReport, ScheduleCurve};
pub use cover::{cover_report, run_cover_experiment, CoverReport, CoverRow};
pub use curves::{run_bounds_curve, run_wasserstein_curve};
pub use table::Table;
pub use validate::{run_validation, validation_report, ValidationReport, ValidationSummary};

use crate::error::Result;

/// Tables of one run, the primary table first.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    /// Outcome of the validation experiment; `None` for the others.
    pub validation_passed: Option<bool>,
}

pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    let (tables, validation_passed) = match config.experiment {
        ExperimentKind::Cover => (vec![run_cover_experiment(config)?], None),
        ExperimentKind::Control => (run_control_experiment(config)?, None),
        ExperimentKind::WassersteinCurve => (vec![run_wasserstein_curve(config)?], None),
        ExperimentKind::BoundsCurve => (run_bounds_curve(config)?, None),
        ExperimentKind::Validate => {
            let report = validation_report(config)?;
            let passed = report.summary.passed;
            (report.tables(), Some(passed))
        }
    };
    Ok(RunOutput { tables, validation_passed })
}
