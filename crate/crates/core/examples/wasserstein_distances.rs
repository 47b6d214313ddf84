// One-dimensional W1: gaussian closed form, CDF quadrature, empirical.

use scenario_drift::wasserstein::{w1_cdf_integral, w1_empirical, w1_gaussian, Dist1D, Empirical, Gaussian};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = Gaussian::new(0.0, 1.0)?;
    let b = Gaussian::new(0.2, 1.2)?;
    let closed = w1_gaussian(&a, &b);
    let quad = w1_cdf_integral(&Dist1D::Gaussian(a), &Dist1D::Gaussian(b), 1e-12)?;
    println!("W1(N(0,1), N(0.2,1.2)): closed form {closed:.15}, quadrature {quad:.15}");

    let same_sigma = w1_gaussian(&a, &Gaussian::new(0.2, 1.0)?);
    println!("equal sigma gives the mean gap: {same_sigma}");

    let x = Empirical::new(vec![0.0, 1.0, 3.0])?;
    let y = Empirical::new(vec![0.5, 2.0])?;
    println!("empirical W1: {}", w1_empirical(&x, &y));

    let mixed = w1_cdf_integral(&Dist1D::Empirical(x), &Dist1D::Gaussian(a), 1e-10)?;
    println!("empirical vs N(0,1): {mixed:.10}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
