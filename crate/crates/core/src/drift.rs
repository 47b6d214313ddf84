//! Time-indexed scenario-generating families.
//!
//! A family with horizon `N` defines a distribution for every step
//! `1..=N+1`: the first `N` generate the observed scenarios and step `N+1`
//! is the measure under which violation is evaluated. Families are
//! immutable tables and can be shared across threads.
//!
//! [`DriftSpec`] records how far the step distributions may be apart in
//! 1-Wasserstein distance, either through a single bound (Model A) or a
//! per-pair function (Model B).

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use nalgebra::Matrix2;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Deserialize;

use crate::error::{domain, Error, Result};
use crate::rng::SeedStream;
use crate::wasserstein::{w1_gaussian, Dist1D, Gaussian};

type RhoFn = dyn Fn(usize, usize) -> f64 + Send + Sync;

/// Wasserstein drift structure of a scenario-generating family.
#[derive(Clone)]
pub enum DriftSpec {
    /// `d_W(P_i, P_j) ≤ rho` for every pair of steps.
    ModelA { rho: f64 },
    /// `d_W(P_i, P_j) ≤ rho(i, j)` with `rho(i, i) = 0`.
    ModelB(Arc<RhoFn>),
}

impl DriftSpec {
    pub fn model_a(rho: f64) -> Result<Self> {
        if !(rho >= 0.0 && rho.is_finite()) {
            return Err(domain(format!("Model A drift bound must be non-negative, got {rho}")));
        }
        Ok(DriftSpec::ModelA { rho })
    }

    pub fn model_b<F>(rho: F) -> Self
    where
        F: Fn(usize, usize) -> f64 + Send + Sync + 'static,
    {
        DriftSpec::ModelB(Arc::new(rho))
    }

    /// No drift at all.
    pub fn stationary() -> Self {
        DriftSpec::ModelA { rho: 0.0 }
    }

    /// The Model A bound seen as a Model B function, `rho·[i ≠ j]`.
    pub fn as_model_b(&self) -> Self {
        match self {
            DriftSpec::ModelA { rho } => {
                let rho = *rho;
                DriftSpec::model_b(move |i, j| if i == j { 0.0 } else { rho })
            }
            other => other.clone(),
        }
    }

    /// Drift bound between steps `i` and `j`; zero on the diagonal.
    pub fn rho(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        match self {
            DriftSpec::ModelA { rho } => *rho,
            DriftSpec::ModelB(f) => f(i, j),
        }
    }

    pub fn is_model_a(&self) -> bool {
        matches!(self, DriftSpec::ModelA { .. })
    }

    /// Checks non-negativity and finiteness of every bound among steps
    /// `1..=steps`.
    pub fn validate(&self, steps: usize) -> Result<()> {
        for i in 1..=steps {
            for j in 1..=steps {
                let r = self.rho(i, j);
                if !(r >= 0.0 && r.is_finite()) {
                    return Err(domain(format!("drift bound rho({i}, {j}) = {r} is not a non-negative number")));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DriftSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DriftSpec::ModelA { rho } => f.debug_struct("ModelA").field("rho", rho).finish(),
            DriftSpec::ModelB(_) => f.write_str("ModelB(<fn>)"),
        }
    }
}

/// A sequence of one-dimensional normals `N(μ_i, σ_i)`, `i = 1..=N+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianDrift1D {
    steps: Vec<Gaussian>,
}

impl GaussianDrift1D {
    /// Builds the family from a callable `i ↦ (μ_i, σ_i)` on `1..=n_steps+1`.
    pub fn from_fn(n_steps: usize, f: impl Fn(usize) -> (f64, f64)) -> Result<Self> {
        if n_steps == 0 {
            return Err(domain("a drift family needs at least one step"));
        }
        let steps = (1..=n_steps + 1)
            .map(|i| {
                let (m, s) = f(i);
                Gaussian::new(m, s)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { steps })
    }

    /// Builds the family from an explicit `(μ, σ)` table covering steps
    /// `1..=N+1`, so the table needs at least two rows.
    pub fn from_table(table: &[(f64, f64)]) -> Result<Self> {
        if table.len() < 2 {
            return Err(domain("a drift table needs rows for steps 1..=N+1 with N ≥ 1"));
        }
        Self::from_fn(table.len() - 1, |i| table[i - 1])
    }

    /// `μ_i = mean0 + mean_slope·i/N`, `σ_i = std0 + std_slope·i/N`.
    pub fn linear(n_steps: usize, mean0: f64, mean_slope: f64, std0: f64, std_slope: f64) -> Result<Self> {
        let n = n_steps as f64;
        Self::from_fn(n_steps, |i| {
            let t = i as f64 / n;
            (mean0 + mean_slope * t, std0 + std_slope * t)
        })
    }

    /// The drifting-normal preset: `μ_i = 0.2·i/N`, `σ_i = 1 + 0.2·i/N`.
    pub fn ramp(n_steps: usize) -> Result<Self> {
        Self::linear(n_steps, 0.0, 0.2, 1.0, 0.2)
    }

    /// Same mean ramp as [`ramp`](Self::ramp) with the scale held at 1.
    pub fn equal_sigma_ramp(n_steps: usize) -> Result<Self> {
        Self::linear(n_steps, 0.0, 0.2, 1.0, 0.0)
    }

    pub fn constant(n_steps: usize, mean: f64, std: f64) -> Result<Self> {
        Self::from_fn(n_steps, |_| (mean, std))
    }

    pub fn n_steps(&self) -> usize {
        self.steps.len() - 1
    }

    /// Step index of the evaluation measure, `N + 1`.
    pub fn eval_step(&self) -> usize {
        self.steps.len()
    }

    pub fn gaussian_at(&self, i: usize) -> &Gaussian {
        assert!((1..=self.steps.len()).contains(&i), "step {i} outside 1..={}", self.steps.len());
        &self.steps[i - 1]
    }

    pub fn mean_at(&self, i: usize) -> f64 {
        self.gaussian_at(i).mean()
    }

    pub fn std_at(&self, i: usize) -> f64 {
        self.gaussian_at(i).std()
    }

    pub fn dist_at(&self, i: usize) -> Dist1D {
        Dist1D::Gaussian(*self.gaussian_at(i))
    }

    pub fn sample_at<R: Rng + ?Sized>(&self, i: usize, rng: &mut R) -> f64 {
        let g = self.gaussian_at(i);
        let z: f64 = rng.sample(StandardNormal);
        g.mean() + g.std() * z
    }

    /// Draws `ξ_1..ξ_count`, each from substream `i` of `seed`.
    pub fn sample_sequence(&self, count: usize, seed: u64) -> Result<Vec<f64>> {
        check_horizon(count, self.steps.len())?;
        let seeds = SeedStream::new(seed);
        Ok((1..=count)
            .map(|i| self.sample_at(i, &mut seeds.rng(i as u64)))
            .collect())
    }

    /// Model B description whose bound is the exact `W1` between steps.
    pub fn drift_spec(&self) -> DriftSpec {
        let family = Arc::new(self.clone());
        DriftSpec::model_b(move |i, j| w1_gaussian(family.gaussian_at(i), family.gaussian_at(j)))
    }

    /// Largest exact `W1` over all pairs of steps.
    pub fn max_pairwise_w1(&self) -> f64 {
        let mut worst = 0.0f64;
        for (a, ga) in self.steps.iter().enumerate() {
            for gb in &self.steps[a + 1..] {
                worst = worst.max(w1_gaussian(ga, gb));
            }
        }
        worst
    }
}

/// Model B drift description of `family`, with `rho(i, j)` the exact
/// 1-Wasserstein distance between steps `i` and `j`.
pub fn drift_spec_of(family: &GaussianDrift1D) -> DriftSpec {
    family.drift_spec()
}

fn check_horizon(count: usize, available: usize) -> Result<()> {
    if count > available {
        return Err(Error::Horizon { requested: count, available });
    }
    Ok(())
}

/// Random 2×2 system matrices with independent gaussian entries around a
/// per-step mean.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGaussianDrift {
    means: Vec<Matrix2<f64>>,
    entry_std: f64,
}

impl MatrixGaussianDrift {
    pub fn from_fn(n_steps: usize, entry_std: f64, mean_at: impl Fn(usize) -> Matrix2<f64>) -> Result<Self> {
        if n_steps == 0 {
            return Err(domain("a drift family needs at least one step"));
        }
        if !(entry_std >= 0.0 && entry_std.is_finite()) {
            return Err(domain(format!("entry std must be non-negative, got {entry_std}")));
        }
        let means: Vec<_> = (1..=n_steps + 1).map(mean_at).collect();
        if means.iter().any(|m| m.iter().any(|x| !x.is_finite())) {
            return Err(domain("mean matrices must be finite"));
        }
        Ok(Self { means, entry_std })
    }

    pub fn constant(n_steps: usize, mean: Matrix2<f64>, entry_std: f64) -> Result<Self> {
        Self::from_fn(n_steps, entry_std, |_| mean)
    }

    /// Mean moves linearly from `start` (step 1) to `end` (step `N+1`).
    pub fn linear(n_steps: usize, start: Matrix2<f64>, end: Matrix2<f64>, entry_std: f64) -> Result<Self> {
        let n = n_steps as f64;
        Self::from_fn(n_steps, entry_std, |i| start + (end - start) * ((i - 1) as f64 / n))
    }

    /// `Ā = [[0.8, −1], [0, −0.9]]`.
    pub fn nominal_mean() -> Matrix2<f64> {
        Matrix2::new(0.8, -1.0, 0.0, -0.9)
    }

    pub fn n_steps(&self) -> usize {
        self.means.len() - 1
    }

    pub fn eval_step(&self) -> usize {
        self.means.len()
    }

    pub fn entry_std(&self) -> f64 {
        self.entry_std
    }

    pub fn mean_matrix_at(&self, i: usize) -> Matrix2<f64> {
        assert!((1..=self.means.len()).contains(&i), "step {i} outside 1..={}", self.means.len());
        self.means[i - 1]
    }

    pub fn sample_at<R: Rng + ?Sized>(&self, i: usize, rng: &mut R) -> Matrix2<f64> {
        let mean = self.mean_matrix_at(i);
        mean.map(|m| {
            let z: f64 = rng.sample(StandardNormal);
            m + self.entry_std * z
        })
    }

    /// Draws `A_(1)..A_(count)`, matrix `i` from substream `i` of `seed`.
    pub fn sample_control_scenarios(&self, count: usize, seed: u64) -> Result<Vec<Matrix2<f64>>> {
        check_horizon(count, self.means.len())?;
        let seeds = SeedStream::new(seed);
        Ok((1..=count)
            .map(|i| self.sample_at(i, &mut seeds.rng(i as u64)))
            .collect())
    }

    /// Largest per-entry mean shift between any two steps. With a common
    /// entry std this is the largest per-entry `W1` between steps.
    pub fn max_entry_shift(&self) -> f64 {
        (0..4)
            .map(|k| {
                let (lo, hi) = self
                    .means
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), m| (lo.min(m[k]), hi.max(m[k])));
                hi - lo
            })
            .fold(0.0, f64::max)
    }

    /// Model A description with `rho` equal to [`max_entry_shift`](Self::max_entry_shift).
    pub fn drift_spec(&self) -> DriftSpec {
        DriftSpec::ModelA { rho: self.max_entry_shift() }
    }
}

/// Draws `ξ_1..ξ_count` from `family`; see [`GaussianDrift1D::sample_sequence`].
pub fn sample_sequence(family: &GaussianDrift1D, count: usize, seed: u64) -> Result<Vec<f64>> {
    family.sample_sequence(count, seed)
}

/// See [`MatrixGaussianDrift::sample_control_scenarios`].
pub fn sample_control_scenarios(family: &MatrixGaussianDrift, count: usize, seed: u64) -> Result<Vec<Matrix2<f64>>> {
    family.sample_control_scenarios(count, seed)
}

/// A drift family together with its declared drift model.
#[derive(Debug, Clone)]
pub struct DriftPreset {
    pub family: GaussianDrift1D,
    pub spec: DriftSpec,
}

/// On-disk form of a [`DriftPreset`].
///
/// ```toml
/// model = "B"          # "A" or "B"
/// n = 309              # horizon N; steps 1..=N+1 are defined
/// family = "ramp"      # "ramp" | "constant" | "table"
/// params = [0.0, 0.2, 1.0, 0.2]
/// rho = 0.25           # Model A only
/// ```
///
/// `params` for `ramp` are `[mean0, mean_slope, std0, std_slope]`, for
/// `constant` `[mean, std]`, and for `table` the flattened pairs
/// `μ_1, σ_1, …, μ_{N+1}, σ_{N+1}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriftPresetFile {
    pub model: String,
    pub n: usize,
    pub family: String,
    #[serde(default)]
    pub params: Vec<f64>,
    pub rho: Option<f64>,
}

impl DriftPreset {
    /// Named presets: `ramp`, `equal_sigma`, `static`.
    pub fn named(name: &str, n_steps: usize) -> Result<Self> {
        let family = match name {
            "ramp" => GaussianDrift1D::ramp(n_steps)?,
            "equal_sigma" => GaussianDrift1D::equal_sigma_ramp(n_steps)?,
            "static" => GaussianDrift1D::constant(n_steps, 0.0, 1.0)?,
            other => {
                return Err(Error::Config(format!(
                    "unknown drift preset `{other}` (expected ramp, equal_sigma or static)"
                )))
            }
        };
        let spec = if name == "static" { DriftSpec::stationary() } else { family.drift_spec() };
        Ok(Self { family, spec })
    }

    pub fn from_file_spec(file: &DriftPresetFile) -> Result<Self> {
        let p = &file.params;
        let want = |len: usize| -> Result<()> {
            if p.len() != len {
                return Err(Error::Config(format!(
                    "family `{}` expects {len} params, got {}",
                    file.family,
                    p.len()
                )));
            }
            Ok(())
        };
        let family = match file.family.as_str() {
            "ramp" => {
                want(4)?;
                GaussianDrift1D::linear(file.n, p[0], p[1], p[2], p[3])?
            }
            "constant" => {
                want(2)?;
                GaussianDrift1D::constant(file.n, p[0], p[1])?
            }
            "table" => {
                want(2 * (file.n + 1))?;
                let rows: Vec<_> = p.chunks(2).map(|c| (c[0], c[1])).collect();
                GaussianDrift1D::from_table(&rows)?
            }
            other => return Err(Error::Config(format!("unknown family kind `{other}`"))),
        };
        let spec = match file.model.as_str() {
            "A" => {
                let rho = file
                    .rho
                    .ok_or_else(|| Error::Config("Model A presets need a `rho` key".into()))?;
                let needed = family.max_pairwise_w1();
                if rho < needed {
                    return Err(Error::Config(format!(
                        "declared rho {rho} is below the family's largest pairwise W1 {needed}"
                    )));
                }
                DriftSpec::model_a(rho)?
            }
            "B" => {
                if file.rho.is_some() {
                    return Err(Error::Config("`rho` is only meaningful for Model A presets".into()));
                }
                family.drift_spec()
            }
            other => return Err(Error::Config(format!("unknown drift model `{other}` (expected A or B)"))),
        };
        Ok(Self { family, spec })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: DriftPresetFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_file_spec(&file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizon_includes_evaluation_step() {
        let fam = GaussianDrift1D::ramp(10).unwrap();
        assert_eq!(fam.n_steps(), 10);
        assert_eq!(fam.eval_step(), 11);
        assert_eq!(fam.sample_sequence(11, 1).unwrap().len(), 11);
        assert!(matches!(
            fam.sample_sequence(12, 1),
            Err(Error::Horizon { requested: 12, available: 11 })
        ));
    }

    #[test]
    fn same_seed_same_sequence() {
        let fam = GaussianDrift1D::ramp(100).unwrap();
        let a = fam.sample_sequence(50, 9).unwrap();
        let b = fam.sample_sequence(50, 9).unwrap();
        assert_eq!(a.iter().map(|x| x.to_bits()).collect::<Vec<_>>(), b.iter().map(|x| x.to_bits()).collect::<Vec<_>>());
        assert_ne!(a, fam.sample_sequence(50, 10).unwrap());
    }

    #[test]
    fn prefix_is_stable_under_longer_draws() {
        let fam = GaussianDrift1D::ramp(100).unwrap();
        let short = fam.sample_sequence(10, 3).unwrap();
        let long = fam.sample_sequence(80, 3).unwrap();
        assert_eq!(short[..], long[..10]);
    }

    #[test]
    fn constant_family_empirical_mean() {
        let fam = GaussianDrift1D::constant(1, 0.0, 1.0).unwrap();
        let seeds = SeedStream::new(5);
        let mut rng = seeds.rng(0);
        let n = 100_000;
        let mean = (0..n).map(|_| fam.sample_at(1, &mut rng)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.02, "{mean}");
    }

    #[test]
    fn ramp_preset_values() {
        let fam = GaussianDrift1D::ramp(100).unwrap();
        assert!((fam.mean_at(50) - 0.1).abs() < 1e-15);
        assert!((fam.std_at(101) - 1.202).abs() < 1e-15);
    }

    #[test]
    fn invalid_sigma_rejected() {
        assert!(GaussianDrift1D::from_fn(3, |i| (0.0, 1.0 - i as f64 * 0.5)).is_err());
        assert!(GaussianDrift1D::from_table(&[(0.0, 1.0)]).is_err());
    }

    #[test]
    fn equal_sigma_drift_is_mean_gap() {
        let n = 309;
        let fam = GaussianDrift1D::equal_sigma_ramp(n).unwrap();
        let spec = drift_spec_of(&fam);
        for i in [1usize, 2, 100, 309, 310] {
            let expected = 0.2 * (n + 1 - i) as f64 / n as f64;
            assert!((spec.rho(i, n + 1) - expected).abs() < 1e-15, "i = {i}");
        }
        assert_eq!(spec.rho(7, 7), 0.0);
    }

    #[test]
    fn model_a_wrapping() {
        let a = DriftSpec::model_a(0.3).unwrap();
        let b = a.as_model_b();
        assert!(!b.is_model_a());
        for (i, j) in [(1, 2), (4, 4), (9, 1)] {
            assert_eq!(a.rho(i, j), b.rho(i, j));
        }
        assert!(DriftSpec::model_a(-0.1).is_err());
    }

    #[test]
    fn matrix_degenerate_std_returns_mean() {
        let fam = MatrixGaussianDrift::constant(4, MatrixGaussianDrift::nominal_mean(), 0.0).unwrap();
        for a in fam.sample_control_scenarios(5, 1).unwrap() {
            assert_eq!(a, MatrixGaussianDrift::nominal_mean());
        }
        assert!(fam.sample_control_scenarios(6, 1).is_err());
    }

    #[test]
    fn matrix_linear_shift_bound_by_pairwise_enumeration() {
        let start = MatrixGaussianDrift::nominal_mean();
        let end = start + Matrix2::new(0.05, -0.03, 0.01, 0.05);
        let fam = MatrixGaussianDrift::linear(20, start, end, 0.02).unwrap();
        let mut worst = 0.0f64;
        for i in 1..=21 {
            for j in 1..=21 {
                let d = fam.mean_matrix_at(i) - fam.mean_matrix_at(j);
                worst = worst.max(d.iter().fold(0.0f64, |m, x| m.max(x.abs())));
            }
        }
        assert!(worst <= 0.05 + 1e-15);
        assert!((fam.max_entry_shift() - worst).abs() < 1e-15);
        match fam.drift_spec() {
            DriftSpec::ModelA { rho } => assert!((rho - worst).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn preset_file_parsing() {
        let p = DriftPreset::parse("model = \"B\"\nn = 5\nfamily = \"ramp\"\nparams = [0.0, 0.2, 1.0, 0.2]\n").unwrap();
        assert_eq!(p.family, GaussianDrift1D::ramp(5).unwrap());
        let a = DriftPreset::parse("model = \"A\"\nn = 5\nfamily = \"constant\"\nparams = [1.0, 2.0]\nrho = 0.1\n").unwrap();
        assert!(a.spec.is_model_a());
        let too_small = "model = \"A\"\nn = 5\nfamily = \"ramp\"\nparams = [0.0, 0.2, 1.0, 0.2]\nrho = 0.01\n";
        assert!(matches!(DriftPreset::parse(too_small), Err(Error::Config(_))));
        assert!(matches!(DriftPreset::parse("model = \"C\"\nn = 5\nfamily = \"ramp\"\nparams = [0,0,1,0]\n"), Err(Error::Config(_))));
        let table = DriftPreset::parse("model = \"B\"\nn = 1\nfamily = \"table\"\nparams = [0.0, 1.0, 0.5, 1.0]\n").unwrap();
        assert!((table.spec.rho(1, 2) - 0.5).abs() < 1e-15);
        assert!(matches!(DriftPreset::named("nope", 3), Err(Error::Config(_))));
    }
}
