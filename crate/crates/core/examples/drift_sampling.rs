// Sampling a drifting scenario sequence and inspecting its drift bounds.

use scenario_drift::drift::{DriftPreset, GaussianDrift1D, MatrixGaussianDrift};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 309;
    let family = GaussianDrift1D::ramp(n)?;
    let xi = family.sample_sequence(n, 42)?;
    println!("first draws: {:.4?}", &xi[..5]);
    println!("step 1 ~ N({}, {}), step N+1 ~ N({}, {})", family.mean_at(1), family.std_at(1), family.mean_at(n + 1), family.std_at(n + 1));

    let spec = family.drift_spec();
    for i in [1, 100, 200, 309, 310] {
        println!("rho({i}, N+1) = {:.6}", spec.rho(i, n + 1));
    }
    println!("largest pairwise W1: {:.6}", family.max_pairwise_w1());

    // Presets can also come from a small TOML file.
    let preset = DriftPreset::parse("model = \"A\"\nn = 50\nfamily = \"ramp\"\nparams = [0.0, 0.2, 1.0, 0.0]\nrho = 0.2\n")?;
    println!("Model A preset: {:?}", preset.spec);

    let matrices = MatrixGaussianDrift::constant(1000, MatrixGaussianDrift::nominal_mean(), 0.02)?;
    let a = matrices.sample_control_scenarios(3, 42)?;
    println!("A_(1) = {:.4}", a[0]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
