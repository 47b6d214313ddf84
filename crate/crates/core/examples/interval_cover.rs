// Robust interval covering on drifted data and its invariant set.

use scenario_drift::drift::GaussianDrift1D;
use scenario_drift::solvers::cover::CoverProblem;
use scenario_drift::solvers::{invariant_set, solve_cover, ScenarioSet};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 309;
    let eta = GaussianDrift1D::ramp(n)?.sample_sequence(n, 7)?;

    let plain = solve_cover(&ScenarioSet::with_radius(eta.clone(), 0.0)?)?;
    println!("static:  x={:.4} gamma={:.4}", plain.center, plain.half_width);
    for r0 in [1.8, 2.0, 2.2, 2.4] {
        let set = ScenarioSet::with_radius(eta.clone(), r0)?;
        let robust = solve_cover(&set)?;
        println!(
            "r0={r0}: x={:.4} gamma={:.4} (gamma - static = {}), binding {} and {}",
            robust.center,
            robust.half_width,
            robust.half_width - plain.half_width,
            robust.binding_low,
            robust.binding_high
        );
    }

    let set = ScenarioSet::with_radius(eta, 2.0)?;
    let inv = invariant_set(&CoverProblem { set: &set })?;
    println!("invariant set {:?}", inv.indices);

    let mut csv = Vec::new();
    ScenarioSet::new(set.observations()[..3].to_vec(), set.radii()[..3].to_vec())?.write_csv(&mut csv)?;
    print!("{}", String::from_utf8(csv)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
