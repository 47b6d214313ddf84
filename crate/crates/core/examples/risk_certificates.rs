// Confidence parameters for convex scenario programs, with and without drift.

use scenario_drift::drift::GaussianDrift1D;
use scenario_drift::risk::{min_samples_static, model_a_beta, model_b_beta, static_beta, Radii};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (eps, beta, d) = (0.1, 1e-4, 2);
    let sizes = min_samples_static(eps, beta, d)?;
    println!("samples for eps={eps}, beta={beta}: explicit bound {}, direct inversion {}", sizes.explicit, sizes.prop1);

    let n = sizes.explicit;
    println!("static beta at N={n}: {:e}", static_beta(n, d, eps)?.beta);

    let a = model_a_beta(n, d, eps, 0.05, 2.0)?;
    println!("Model A, rho=0.05, r=2: product {:e}, exponential {:e}", a.product.beta, a.exponential.beta);

    let spec = GaussianDrift1D::ramp(n)?.drift_spec();
    for r0 in [1.8, 2.0, 2.2, 2.4] {
        let cert = model_b_beta(n, d, eps, &spec, &Radii::Constant(r0))?;
        println!("Model B ramp, r0={r0}: beta={:.4} ({})", cert.beta, cert.source);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
