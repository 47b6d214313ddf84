use super::config::ExperimentConfig;
use super::table::{cell, Table};
use crate::drift::DriftSpec;
use crate::error::{domain, Result};
use crate::risk::{min_samples_static, model_b_beta, Radii};
use crate::wasserstein::{w1_cdf_integral, w1_gaussian};

/// `W1(P_i, P_{N+1})` for `i = 1..=N+1`, closed form and by quadrature,
/// next to the mean gap `|μ_i − μ_{N+1}|`.
pub fn run_wasserstein_curve(config: &ExperimentConfig) -> Result<Table> {
    let p = &config.params;
    let family = p.drift_preset(p.n)?.family;
    let eval = family.eval_step();
    let target = family.dist_at(eval);
    let mut t = Table::new("wasserstein_curve", &["i", "exact", "quadrature", "mean_gap"]);
    for i in 1..=eval {
        let exact = w1_gaussian(family.gaussian_at(i), family.gaussian_at(eval));
        let quad = w1_cdf_integral(&family.dist_at(i), &target, p.quad_tol)?;
        t.push(vec![cell(i), cell(exact), cell(quad), cell((family.mean_at(i) - family.mean_at(eval)).abs())]);
    }
    Ok(t)
}

/// Certificate `β` against `r0` for the drift preset and without drift,
/// and both sample sizes against `ε`.
pub fn run_bounds_curve(config: &ExperimentConfig) -> Result<Vec<Table>> {
    let p = &config.params;
    if p.r0_grid.is_empty() || p.eps_grid.is_empty() {
        return Err(domain("bounds curves need non-empty r0 and epsilon grids"));
    }
    let preset = p.drift_preset(p.n)?;
    let mut by_r0 = Table::new("bounds_r0", &["r0", "beta_model_b", "beta_rho0"]);
    for &r0 in &p.r0_grid {
        let radii = Radii::Constant(r0);
        let drifted = model_b_beta(p.n, p.complexity, p.epsilon, &preset.spec, &radii)?;
        let still = model_b_beta(p.n, p.complexity, p.epsilon, &DriftSpec::stationary(), &radii)?;
        by_r0.push(vec![cell(r0), cell(drifted.beta), cell(still.beta)]);
    }
    let mut by_eps = Table::new("bounds_epsilon", &["epsilon", "n_explicit", "n_prop1"]);
    for &eps in &p.eps_grid {
        let sizes = min_samples_static(eps, p.beta, p.complexity)?;
        by_eps.push(vec![cell(eps), cell(sizes.explicit), cell(sizes.prop1)]);
    }
    Ok(vec![by_r0, by_eps])
}
