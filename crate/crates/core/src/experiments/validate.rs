use rayon::prelude::*;

use super::config::{ExperimentConfig, ValidationMode};
use super::table::{cell, Table};
use crate::drift::GaussianDrift1D;
use crate::error::{domain, Result};
use crate::risk::{min_samples_static, model_b_beta, static_beta, Radii, RiskCertificate};
use crate::rng::SeedStream;
use crate::solvers::{estimate_violation, solve_cover, ScenarioSet};

/// Seed label for the evaluation draws of a repetition.
const EVAL_LABEL: u64 = 1 << 32;

#[derive(Debug, Clone)]
pub struct ValidationSummary {
    pub mode: ValidationMode,
    pub n: usize,
    pub r0: f64,
    pub epsilon: f64,
    pub repetitions: usize,
    pub samples: u64,
    pub exceedances: usize,
    pub rate: f64,
    pub certificate: RiskCertificate,
    /// Binomial standard error at the certified rate.
    pub standard_error: f64,
    pub bound: f64,
    pub passed: bool,
}

impl ValidationSummary {
    pub fn vacuous(&self) -> bool {
        self.certificate.is_vacuous()
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub v_hat: Vec<f64>,
    pub summary: ValidationSummary,
}

impl ValidationReport {
    pub fn tables(&self) -> Vec<Table> {
        let mut reps = Table::new("validation", &["repetition", "v_hat", "exceeded"]);
        for (r, v) in self.v_hat.iter().enumerate() {
            reps.push(vec![cell(r), cell(v), cell(*v > self.summary.epsilon)]);
        }
        let s = &self.summary;
        let mut summary = Table::new(
            "validation_summary",
            &[
                "mode",
                "n",
                "r0",
                "epsilon",
                "repetitions",
                "samples",
                "exceedances",
                "rate",
                "beta",
                "certificate",
                "standard_error",
                "bound",
                "vacuous",
                "passed",
            ],
        );
        summary.push(vec![
            match s.mode {
                ValidationMode::Static => "static".into(),
                ValidationMode::Drifted => "drifted".into(),
            },
            cell(s.n),
            cell(s.r0),
            cell(s.epsilon),
            cell(s.repetitions),
            cell(s.samples),
            cell(s.exceedances),
            cell(s.rate),
            cell(s.certificate.beta),
            s.certificate.source.as_str().into(),
            cell(s.standard_error),
            cell(s.bound),
            cell(s.vacuous()),
            cell(s.passed),
        ]);
        vec![reps, summary]
    }
}

/// Repeats draw, solve and evaluate under `P_{N+1}`, then compares the
/// frequency of `V̂ > ε` with the certified `β` plus three binomial
/// standard errors.
pub fn validation_report(config: &ExperimentConfig) -> Result<ValidationReport> {
    let p = &config.params;
    if p.repetitions < 100 {
        return Err(domain(format!("validation needs at least 100 repetitions, got {}", p.repetitions)));
    }
    let (n, r0, family, certificate) = match p.validation_mode {
        ValidationMode::Static => {
            let n = min_samples_static(p.epsilon, p.beta, p.complexity)?.explicit;
            (n, 0.0, GaussianDrift1D::constant(n, 0.0, 1.0)?, static_beta(n, p.complexity, p.epsilon)?)
        }
        ValidationMode::Drifted => {
            let preset = p.drift_preset(p.n)?;
            let cert = model_b_beta(p.n, p.complexity, p.epsilon, &preset.spec, &Radii::Constant(p.validation_r0))?;
            (p.n, p.validation_r0, preset.family, cert)
        }
    };
    let root = SeedStream::new(config.seed);
    let v_hat = (0..p.repetitions)
        .into_par_iter()
        .map(|r| {
            let rep = root.child(r as u64);
            let scenarios = family.sample_sequence(n, rep.seed())?;
            let solution = solve_cover(&ScenarioSet::with_radius(scenarios, r0)?)?;
            Ok(estimate_violation(&solution, &family, p.samples, rep.child(EVAL_LABEL).seed())?.estimate)
        })
        .collect::<Result<Vec<f64>>>()?;
    let exceedances = v_hat.iter().filter(|v| **v > p.epsilon).count();
    let rate = exceedances as f64 / p.repetitions as f64;
    let beta = certificate.beta.min(1.0);
    let standard_error = (beta * (1.0 - beta) / p.repetitions as f64).sqrt();
    let bound = certificate.beta + 3.0 * standard_error;
    let passed = certificate.is_vacuous() || rate <= bound;
    let summary = ValidationSummary {
        mode: p.validation_mode,
        n,
        r0,
        epsilon: p.epsilon,
        repetitions: p.repetitions,
        samples: p.samples,
        exceedances,
        rate,
        certificate,
        standard_error,
        bound,
        passed,
    };
    Ok(ValidationReport { v_hat, summary })
}

pub fn run_validation(config: &ExperimentConfig) -> Result<Vec<Table>> {
    Ok(validation_report(config)?.tables())
}
