//! Monte Carlo estimates of violation probabilities.

use nalgebra::Matrix2;
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::drift::{GaussianDrift1D, MatrixGaussianDrift};
use crate::error::{domain, Result};
use crate::rng::SeedStream;
use crate::wasserstein::{w1_gaussian, Gaussian};

/// Two-sided 95% standard normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

const CHUNK: usize = 4096;

/// A decision whose feasibility can be tested against a realized uncertainty.
pub trait Decision<T>: Sync {
    fn violated_by(&self, xi: &T) -> bool;
}

impl<T, F: Fn(&T) -> bool + Sync> Decision<T> for F {
    fn violated_by(&self, xi: &T) -> bool {
        self(xi)
    }
}

/// Source of evaluation draws.
pub trait EvalDistribution<T>: Sync {
    fn draw(&self, rng: &mut ChaCha20Rng) -> T;
}

impl EvalDistribution<f64> for Gaussian {
    fn draw(&self, rng: &mut ChaCha20Rng) -> f64 {
        let z: f64 = rng.sample(rand_distr::StandardNormal);
        self.mean() + self.std() * z
    }
}

/// Draws from the evaluation step `N+1`.
impl EvalDistribution<f64> for GaussianDrift1D {
    fn draw(&self, rng: &mut ChaCha20Rng) -> f64 {
        self.sample_at(self.eval_step(), rng)
    }
}

/// Draws from the evaluation step `N+1`.
impl EvalDistribution<Matrix2<f64>> for MatrixGaussianDrift {
    fn draw(&self, rng: &mut ChaCha20Rng) -> Matrix2<f64> {
        self.sample_at(self.eval_step(), rng)
    }
}

/// Draws from step `i` of a 1-D family.
#[derive(Debug, Clone, Copy)]
pub struct AtStep<'a> {
    pub family: &'a GaussianDrift1D,
    pub step: usize,
}

impl EvalDistribution<f64> for AtStep<'_> {
    fn draw(&self, rng: &mut ChaCha20Rng) -> f64 {
        self.family.sample_at(self.step, rng)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViolationEstimate {
    pub violations: u64,
    pub n_samples: u64,
    pub estimate: f64,
    /// Wilson 95% interval.
    pub lower: f64,
    pub upper: f64,
}

impl ViolationEstimate {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }

    /// Plain binomial standard error of the estimate.
    pub fn standard_error(&self) -> f64 {
        binomial_se(self.estimate, self.n_samples)
    }
}

pub fn binomial_se(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lower = if k == 0 { 0.0 } else { (center - half).max(0.0) };
    let upper = if k as f64 == n { 1.0 } else { (center + half).min(1.0) };
    (lower, upper)
}

/// Counts how often `decision` is violated in `n_samples` draws. Samples
/// are taken in fixed-size chunks, chunk `c` from stream `c` of `seed`, so
/// the count does not depend on the thread count.
pub fn estimate_violation<T, D, E>(decision: &D, dist: &E, n_samples: u64, seed: u64) -> Result<ViolationEstimate>
where
    D: Decision<T> + ?Sized,
    E: EvalDistribution<T> + ?Sized,
{
    if n_samples == 0 {
        return Err(domain("at least one Monte Carlo sample is required"));
    }
    let seeds = SeedStream::new(seed);
    let chunks = n_samples.div_ceil(CHUNK as u64);
    let violations: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = seeds.rng(c);
            let len = (n_samples - c * CHUNK as u64).min(CHUNK as u64);
            (0..len).filter(|_| decision.violated_by(&dist.draw(&mut rng))).count() as u64
        })
        .sum();
    let (lower, upper) = wilson_interval(violations, n_samples, Z95);
    Ok(ViolationEstimate { violations, n_samples, estimate: violations as f64 / n_samples as f64, lower, upper })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingCheck {
    pub step: usize,
    pub p_step: f64,
    pub p_eval: f64,
    /// `ρ(i, N+1) / r_i` with the exact `W1` as `ρ`.
    pub slack: f64,
    /// Three combined standard errors.
    pub tolerance: f64,
    pub passed: bool,
    /// `slack ≥ 1`: the inequality holds for any region.
    pub vacuous: bool,
}

/// Tests `P_i(region) ≤ P_{N+1}(region) + ρ(i,N+1)/r_i` by sampling both
/// sides. Each step draws from its own child seed, so `i = N+1` compares a
/// sample with itself.
pub fn coupling_check<F>(
    family: &GaussianDrift1D,
    region: F,
    i: usize,
    r_i: f64,
    n_samples: u64,
    seed: u64,
) -> Result<CouplingCheck>
where
    F: Fn(f64) -> bool + Sync,
{
    if !(r_i > 0.0) {
        return Err(domain(format!("radius must be positive, got {r_i}")));
    }
    let eval = family.eval_step();
    if i == 0 || i > eval {
        return Err(domain(format!("step {i} outside 1..={eval}")));
    }
    let seeds = SeedStream::new(seed);
    let inside = |xi: &f64| region(*xi);
    let side = |step: usize| {
        estimate_violation(&inside, &AtStep { family, step }, n_samples, seeds.child(step as u64).seed())
    };
    let p_step = side(i)?.estimate;
    let p_eval = side(eval)?.estimate;
    let slack = w1_gaussian(family.gaussian_at(i), family.gaussian_at(eval)) / r_i;
    let tolerance = 3.0 * (binomial_se(p_step, n_samples).powi(2) + binomial_se(p_eval, n_samples).powi(2)).sqrt();
    Ok(CouplingCheck {
        step: i,
        p_step,
        p_eval,
        slack,
        tolerance,
        passed: p_step <= p_eval + slack + tolerance,
        vacuous: slack >= 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::cover::CoverSolution;

    fn interval(lo: f64, hi: f64) -> CoverSolution {
        CoverSolution { center: 0.5 * (lo + hi), half_width: 0.5 * (hi - lo), binding_low: 1, binding_high: 1 }
    }

    #[test]
    fn full_coverage_never_violates() {
        let std = Gaussian::new(0.0, 1.0).unwrap();
        let e = estimate_violation(&interval(-1e10, 1e10), &std, 10_000, 1).unwrap();
        assert_eq!(e.violations, 0);
        assert_eq!(e.lower, 0.0);
    }

    #[test]
    fn two_sided_five_percent() {
        let std = Gaussian::new(0.0, 1.0).unwrap();
        let e = estimate_violation(&interval(-Z95, Z95), &std, 1_000_000, 7).unwrap();
        let se = binomial_se(0.05, 1_000_000);
        assert!((e.estimate - 0.05).abs() <= 3.0 * se, "{}", e.estimate);
        assert!(e.lower < 0.05 && 0.05 < e.upper);
    }

    #[test]
    fn deterministic_under_seed() {
        let std = Gaussian::new(0.3, 2.0).unwrap();
        let d = interval(-1.0, 2.0);
        let a = estimate_violation(&d, &std, 50_001, 99).unwrap();
        let b = estimate_violation(&d, &std, 50_001, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n_samples, 50_001);
    }

    #[test]
    fn wilson_reference_values() {
        let (lo, hi) = wilson_interval(5, 100, 1.96);
        assert!((lo - 0.021_543_361_456_313_556).abs() < 1e-15, "{lo}");
        assert!((hi - 0.111_751_965_272_088_16).abs() < 1e-15, "{hi}");
        assert_eq!(wilson_interval(0, 10, Z95).0, 0.0);
        assert_eq!(wilson_interval(10, 10, Z95).1, 1.0);
    }

    #[test]
    fn zero_samples_rejected() {
        let std = Gaussian::new(0.0, 1.0).unwrap();
        assert!(estimate_violation(&interval(0.0, 1.0), &std, 0, 1).is_err());
    }

    #[test]
    fn coupling_at_eval_step_is_trivial() {
        let family = GaussianDrift1D::ramp(50).unwrap();
        let c = coupling_check(&family, |x| x > 1.0, 51, 2.0, 10_000, 3).unwrap();
        assert_eq!(c.slack, 0.0);
        assert_eq!(c.p_step, c.p_eval);
        assert!(c.passed);
    }

    #[test]
    fn tiny_radius_is_vacuous() {
        let family = GaussianDrift1D::ramp(50).unwrap();
        let c = coupling_check(&family, |x| x > 0.0, 1, 1e-3, 2_000, 3).unwrap();
        assert!(c.vacuous && c.passed);
    }
}
