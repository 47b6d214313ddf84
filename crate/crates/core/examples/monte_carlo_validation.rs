// Violation estimates, the coupling inequality, and a small validation run.

use scenario_drift::drift::GaussianDrift1D;
use scenario_drift::experiments::{validation_report, ExperimentConfig, ExperimentKind};
use scenario_drift::solvers::{coupling_check, estimate_violation, solve_cover, ScenarioSet};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 309;
    let family = GaussianDrift1D::ramp(n)?;
    let set = ScenarioSet::with_radius(family.sample_sequence(n, 3)?, 2.0)?;
    let sol = solve_cover(&set)?;

    let v = estimate_violation(&sol, &family, 100_000, 5)?;
    println!("V_hat = {} (95% interval [{:.6}, {:.6}])", v.estimate, v.lower, v.upper);

    // Coupling between step i and step N+1 on the region missed by the non-robust interval.
    let plain = solve_cover(&ScenarioSet::with_radius(set.observations().to_vec(), 0.0)?)?;
    let outside = |x: f64| !plain.contains(x);
    for i in [1, 150, 310] {
        let c = coupling_check(&family, outside, i, 2.0, 20_000, 9)?;
        println!("coupling at i={i}: P_i={:.5} P_N+1={:.5} slack={:.5} passed={}", c.p_step, c.p_eval, c.slack, c.passed);
    }

    let mut config = ExperimentConfig::new(ExperimentKind::Validate, 1);
    config.params.repetitions = 100;
    config.params.samples = 2_000;
    let report = validation_report(&config)?;
    let s = &report.summary;
    println!("{} of {} repetitions exceeded eps; certified beta {:.4}, passed={}", s.exceedances, s.repetitions, s.certificate.beta, s.passed);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
