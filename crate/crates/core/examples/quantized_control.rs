// Quantized-input control over sampled system matrices.

use scenario_drift::drift::MatrixGaussianDrift;
use scenario_drift::solvers::{build_reachability, invariant_set, solve_control, ControlInstance, ControlProblem, Strategy};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let family = MatrixGaussianDrift::constant(50, MatrixGaussianDrift::nominal_mean(), 0.02)?;
    let instance = ControlInstance::with_defaults(4, family.sample_control_scenarios(50, 11)?)?;
    println!("R_(1) =\n{:.4}", build_reachability(&instance, 1));

    let exhaustive = solve_control(&instance, Strategy::Exhaustive)?;
    let bnb = solve_control(&instance, Strategy::BranchAndBound)?;
    println!("exhaustive:       u={:?} h={}", exhaustive.input_sequence, exhaustive.objective);
    println!("branch and bound: u={:?} h={}", bnb.input_sequence, bnb.objective);

    let inv = invariant_set(&ControlProblem::new(&instance, Strategy::BranchAndBound))?;
    println!("invariant set {:?} (k = {})", inv.indices, inv.cardinality());

    // 11^8 sequences are beyond exhaustive search.
    if let Err(e) = solve_control(&ControlInstance::with_defaults(8, instance.scenarios.clone())?, Strategy::Exhaustive) {
        println!("T=8 exhaustive: {e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
