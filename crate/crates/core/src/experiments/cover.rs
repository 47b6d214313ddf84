use super::config::ExperimentConfig;
use super::table::{cell, Table};
use crate::error::Result;
use crate::risk::{model_b_beta, static_beta, Radii, RiskCertificate};
use crate::solvers::{solve_cover, CoverSolution, ScenarioSet};

#[derive(Debug, Clone)]
pub struct CoverRow {
    pub r0: f64,
    pub static_solution: CoverSolution,
    pub robust_solution: CoverSolution,
    pub beta_model_b: RiskCertificate,
    pub beta_static: RiskCertificate,
}

#[derive(Debug, Clone)]
pub struct CoverReport {
    /// The draws shared by every row.
    pub scenarios: Vec<f64>,
    pub rows: Vec<CoverRow>,
}

/// Draws `N` scenarios from the drift preset once, then solves the static
/// and the robust covering problem for every `r0` on those same draws.
pub fn cover_report(config: &ExperimentConfig) -> Result<CoverReport> {
    let p = &config.params;
    let preset = p.drift_preset(p.n)?;
    let scenarios = preset.family.sample_sequence(p.n, config.seed)?;
    let static_solution = solve_cover(&ScenarioSet::with_radius(scenarios.clone(), 0.0)?)?;
    let beta_static = static_beta(p.n, p.complexity, p.epsilon)?;
    let rows = p
        .r0
        .iter()
        .map(|&r0| {
            Ok(CoverRow {
                r0,
                static_solution,
                robust_solution: solve_cover(&ScenarioSet::with_radius(scenarios.clone(), r0)?)?,
                beta_model_b: model_b_beta(p.n, p.complexity, p.epsilon, &preset.spec, &Radii::Constant(r0))?,
                beta_static: beta_static.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoverReport { scenarios, rows })
}

impl CoverReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(
            "cover",
            &[
                "r0",
                "gamma_static",
                "gamma_robust",
                "beta_model_b",
                "beta_static",
                "center_static",
                "center_robust",
                "binding_low",
                "binding_high",
            ],
        );
        for row in &self.rows {
            t.push(vec![
                cell(row.r0),
                cell(row.static_solution.half_width),
                cell(row.robust_solution.half_width),
                cell(row.beta_model_b.beta),
                cell(row.beta_static.beta),
                cell(row.static_solution.center),
                cell(row.robust_solution.center),
                cell(row.robust_solution.binding_low),
                cell(row.robust_solution.binding_high),
            ]);
        }
        t
    }

    /// The scenario draws in the columnar scenario format, radius `r0`.
    pub fn scenario_set(&self, r0: f64) -> Result<ScenarioSet<f64>> {
        ScenarioSet::with_radius(self.scenarios.clone(), r0)
    }
}

pub fn run_cover_experiment(config: &ExperimentConfig) -> Result<Table> {
    Ok(cover_report(config)?.table())
}
