// Risk levels ε(k) certified after observing an invariant set of size k.

use scenario_drift::drift::DriftSpec;
use scenario_drift::risk::{epsilon_schedule_constant_r, epsilon_schedule_general, BetaSplit, Radii};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (n, beta) = (1000, 1e-2);
    for rho in [0.0, 0.01, 0.05] {
        let s = epsilon_schedule_constant_r(n, beta, rho, 1.0)?;
        let picks: Vec<String> = [0, 5, 10, 50, 100, 1000].iter().map(|&k| format!("{:.4}", s.at(k))).collect();
        println!("rho/r0={rho}: eps(0,5,10,50,100,N) = {}", picks.join(", "));
    }

    // Per-scenario radii and a drift bound that fades toward the evaluation step.
    let n = 100;
    let drift = DriftSpec::model_b(move |i, j| 0.05 * (j as f64 - i as f64).abs() / n as f64);
    let radii = Radii::PerScenario((1..=n).map(|i| 1.0 + i as f64 / n as f64).collect());
    let s = epsilon_schedule_general(n, beta, &drift, &radii, &BetaSplit::Even)?;
    println!("general schedule, N={n}: eps(3)={:.6}, eps(20)={:.6}, flagged={}", s.at(3), s.at(20), s.any_flagged());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
