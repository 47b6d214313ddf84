use super::config::ExperimentConfig;
use super::table::{cell, join, Table};
use crate::drift::MatrixGaussianDrift;
use crate::error::Result;
use crate::risk::{epsilon_schedule_constant_r, EpsilonSchedule, ScheduleFlag};
use crate::solvers::{invariant_set, ControlInstance, ControlProblem, ControlSolution, InvariantSet, Strategy};

#[derive(Debug, Clone)]
pub struct ScheduleCurve {
    pub rho: f64,
    pub r0: f64,
    pub schedule: EpsilonSchedule,
}

#[derive(Debug, Clone)]
pub struct ControlReport {
    pub instance: ControlInstance,
    pub strategy: Strategy,
    pub invariant: InvariantSet<ControlSolution>,
    pub curves: Vec<ScheduleCurve>,
}

impl ControlReport {
    pub fn solution(&self) -> &ControlSolution {
        &self.invariant.solution
    }

    /// `ε(|I|)` of each curve.
    pub fn realized_epsilons(&self) -> Vec<f64> {
        let k = self.invariant.cardinality();
        self.curves.iter().map(|c| c.schedule.at(k)).collect()
    }

    pub fn tables(&self) -> Vec<Table> {
        let k_real = self.invariant.cardinality();
        let mut schedule = Table::new("control_schedule", &["rho", "r0", "rho_over_r0", "k", "epsilon", "flag", "realized"]);
        for c in &self.curves {
            for (k, (eps, flag)) in c.schedule.values.iter().zip(&c.schedule.flags).enumerate() {
                schedule.push(vec![
                    cell(c.rho),
                    cell(c.r0),
                    cell(c.rho / c.r0),
                    cell(k),
                    cell(eps),
                    flag_name(*flag).into(),
                    cell(k == k_real),
                ]);
            }
        }
        let mut solution = Table::new(
            "control_solution",
            &["horizon", "n_scenarios", "strategy", "objective", "inputs", "invariant_k", "invariant_indices"],
        );
        solution.push(vec![
            cell(self.instance.horizon),
            cell(self.instance.n_scenarios()),
            self.strategy.as_str().into(),
            cell(self.solution().objective),
            join(&self.solution().input_sequence),
            cell(k_real),
            join(&self.invariant.indices),
        ]);
        vec![schedule, solution]
    }
}

fn flag_name(flag: ScheduleFlag) -> &'static str {
    match flag {
        ScheduleFlag::Exact => "exact",
        ScheduleFlag::Clamped => "clamped",
        ScheduleFlag::NoRoot => "no_root",
    }
}

/// Samples `A_(1)..A_(N)` around `Ā`, solves, extracts the invariant set
/// and evaluates one ε(k) schedule per `(ρ, r0)` pair.
pub fn control_report(config: &ExperimentConfig) -> Result<ControlReport> {
    let p = &config.params;
    let strategy = p.strategy()?;
    let family = MatrixGaussianDrift::constant(p.control_n, MatrixGaussianDrift::nominal_mean(), p.entry_std)?;
    let scenarios = family.sample_control_scenarios(p.control_n, config.seed)?;
    let instance = ControlInstance::new(
        p.horizon,
        ControlInstance::default_x0(),
        p.inputs.clone(),
        ControlInstance::default_b(),
        scenarios,
    )?;
    let invariant = invariant_set(&ControlProblem::new(&instance, strategy))?;
    let curves = p
        .rho_r0
        .iter()
        .map(|&[rho, r0]| {
            Ok(ScheduleCurve { rho, r0, schedule: epsilon_schedule_constant_r(p.control_n, p.schedule_beta, rho, r0)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ControlReport { instance, strategy, invariant, curves })
}

pub fn run_control_experiment(config: &ExperimentConfig) -> Result<Vec<Table>> {
    Ok(control_report(config)?.tables())
}
