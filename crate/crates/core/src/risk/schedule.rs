//! A-posteriori risk schedules `ε(k)` for non-convex scenario problems.
//!
//! After solving, the cardinality `k` of an invariant set is observed and
//! the solution is certified at level `ε(k)`. The schedule is chosen so that
//! the per-`k` failure bounds
//!
//! ```text
//! Σ_{|I|=k} Π_{i∉I} (1 − (ε(k) − ρ(i,N+1)/r_i)₊)
//! ```
//!
//! add up to `β` over `k = 0..N−1`, with `ε(N) = 1`.

use rayon::prelude::*;

use super::subsets::ln_complement_sum;
use super::{check_unit_open, ln_choose, survival_factors, Radii};
use crate::drift::DriftSpec;
use crate::error::{domain, Result};

const BISECTION_TOL: f64 = 1e-12;

/// Drift-to-radius ratio the schedule was computed for.
#[derive(Debug, Clone, PartialEq)]
pub enum RhoOverR {
    Constant(f64),
    PerScenario(Vec<f64>),
}

/// How a schedule entry was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleFlag {
    Exact,
    /// The unconstrained value fell outside `[0, 1]` and was clipped.
    Clamped,
    /// No root in the bisection bracket; the entry was set to 1.
    NoRoot,
}

/// `ε(0) .. ε(N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSchedule {
    pub values: Vec<f64>,
    pub flags: Vec<ScheduleFlag>,
    pub beta: f64,
    pub rho_over_r: RhoOverR,
}

impl EpsilonSchedule {
    pub fn n_scenarios(&self) -> usize {
        self.values.len() - 1
    }

    pub fn at(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn any_flagged(&self) -> bool {
        self.flags.iter().any(|f| *f != ScheduleFlag::Exact)
    }
}

/// How `β` is shared among the `N` cardinalities `k = 0..N−1`.
#[derive(Debug, Clone, PartialEq)]
pub enum BetaSplit {
    /// `β/N` each.
    Even,
    /// Non-negative weights summing to one, one per `k`.
    Custom(Vec<f64>),
}

impl BetaSplit {
    fn shares(&self, n: usize, beta: f64) -> Result<Vec<f64>> {
        match self {
            BetaSplit::Even => Ok(vec![beta / n as f64; n]),
            BetaSplit::Custom(w) => {
                if w.len() != n {
                    return Err(domain(format!("split needs {n} weights, got {}", w.len())));
                }
                if w.iter().any(|x| !(*x >= 0.0)) {
                    return Err(domain("split weights must be non-negative"));
                }
                let total: f64 = w.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(domain(format!("split weights must sum to 1, got {total}")));
                }
                Ok(w.iter().map(|x| x * beta).collect())
            }
        }
    }
}

fn clamp_unit(x: f64) -> (f64, ScheduleFlag) {
    if x > 1.0 {
        (1.0, ScheduleFlag::Clamped)
    } else if x < 0.0 {
        (0.0, ScheduleFlag::Clamped)
    } else {
        (x, ScheduleFlag::Exact)
    }
}

/// Closed-form schedule for a constant radius `r0` and an even split:
/// `ε(k) = 1 + ρ/r0 − (β / (N·C(N,k)))^{1/(N−k)}`, `ε(N) = 1`.
pub fn epsilon_schedule_constant_r(n: usize, beta: f64, rho: f64, r0: f64) -> Result<EpsilonSchedule> {
    if n == 0 {
        return Err(domain("at least one scenario is required"));
    }
    check_unit_open("beta", beta)?;
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(domain(format!("r0 must be positive, got {r0}")));
    }
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(domain(format!("rho must be non-negative, got {rho}")));
    }
    let gap = rho / r0;
    let ln_share = beta.ln() - (n as f64).ln();
    let (mut values, mut flags): (Vec<f64>, Vec<ScheduleFlag>) = (0..n)
        .map(|k| {
            let root = ((ln_share - ln_choose(n, k)) / (n - k) as f64).exp();
            clamp_unit(1.0 + gap - root)
        })
        .unzip();
    values.push(1.0);
    flags.push(ScheduleFlag::Exact);
    Ok(EpsilonSchedule { values, flags, beta, rho_over_r: RhoOverR::Constant(gap) })
}

/// `Σ_{|I|=k} Π_{i∉I} (1 − (ε − ρ(i,N+1)/r_i)₊)`, evaluated exactly through
/// the elementary-symmetric recursion.
pub fn nonconvex_subset_sum(n: usize, k: usize, epsilon: f64, drift: &DriftSpec, radii: &Radii) -> Result<f64> {
    radii.validate(n)?;
    Ok(ln_complement_sum(&survival_factors(n, epsilon, drift, radii), k).exp())
}

/// Solves `Σ_{|I|=k} Π_{i∉I} (1 − (ε − ρ(i,N+1)/r_i)₊) = beta_k` for `ε` by
/// bisection on `[0, 1 + max_i ρ(i,N+1)/r_i]`.
pub fn epsilon_at_cardinality(
    n: usize,
    k: usize,
    beta_k: f64,
    drift: &DriftSpec,
    radii: &Radii,
) -> Result<(f64, ScheduleFlag)> {
    radii.validate(n)?;
    if k > n {
        return Err(domain(format!("cardinality {k} exceeds N = {n}")));
    }
    if k == n {
        return Ok((1.0, ScheduleFlag::Exact));
    }
    if !(beta_k > 0.0) {
        return Ok((1.0, ScheduleFlag::NoRoot));
    }
    let gaps: Vec<f64> = (1..=n).map(|i| drift.rho(i, n + 1) / radii.get(i)).collect();
    let target = beta_k.ln();
    let ln_sum = |eps: f64| {
        let factors: Vec<f64> = gaps.iter().map(|g| (1.0 - (eps - g).max(0.0)).clamp(0.0, 1.0)).collect();
        ln_complement_sum(&factors, k)
    };

    let mut lo = 0.0;
    let mut hi = 1.0 + gaps.iter().copied().fold(0.0, f64::max);
    if ln_sum(lo) <= target {
        return Ok((0.0, ScheduleFlag::Exact));
    }
    if ln_sum(hi) > target {
        return Ok((1.0, ScheduleFlag::NoRoot));
    }
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ln_sum(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(clamp_unit(hi))
}

/// Schedule for arbitrary Model A/B drift and per-scenario radii.
///
/// Each `k < N` is an independent bisection costing `O(N·(N−k))` per step,
/// so the full schedule is cubic in `N`; entries are computed in parallel.
pub fn epsilon_schedule_general(
    n: usize,
    beta: f64,
    drift: &DriftSpec,
    radii: &Radii,
    split: &BetaSplit,
) -> Result<EpsilonSchedule> {
    if n == 0 {
        return Err(domain("at least one scenario is required"));
    }
    check_unit_open("beta", beta)?;
    radii.validate(n)?;
    let shares = split.shares(n, beta)?;
    let entries = (0..n)
        .into_par_iter()
        .map(|k| epsilon_at_cardinality(n, k, shares[k], drift, radii))
        .collect::<Result<Vec<_>>>()?;
    let (mut values, mut flags): (Vec<f64>, Vec<ScheduleFlag>) = entries.into_iter().unzip();
    values.push(1.0);
    flags.push(ScheduleFlag::Exact);
    let rho_over_r = RhoOverR::PerScenario((1..=n).map(|i| drift.rho(i, n + 1) / radii.get(i)).collect());
    Ok(EpsilonSchedule { values, flags, beta, rho_over_r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn last_entry_is_one() {
        let s = epsilon_schedule_constant_r(1000, 1e-2, 0.0, 1.0).unwrap();
        assert_eq!(s.at(1000), 1.0);
        assert_eq!(s.values.len(), 1001);
    }

    #[test]
    fn frozen_constant_radius_values() {
        // 1 + g − (β/(N·C(N,k)))^{1/(N−k)} at 40 digits; N = 1000, β = 0.01.
        let table: [(f64, [f64; 5]); 3] = [
            (0.0, [0.011_446_905_343_061_16, 0.018_270_159_381_116_316, 0.063_964_561_823_961_34, 0.309_592_702_898_772_95, 0.753_885_984_816_393_8]),
            (0.01, [0.021_446_905_343_061_16, 0.028_270_159_381_116_316, 0.073_964_561_823_961_34, 0.319_592_702_898_772_95, 0.763_885_984_816_393_8]),
            (0.05, [0.061_446_905_343_061_16, 0.068_270_159_381_116_316, 0.113_964_561_823_961_34, 0.359_592_702_898_772_95, 0.803_885_984_816_393_8]),
        ];
        for (g, want) in table {
            let s = epsilon_schedule_constant_r(1000, 1e-2, g, 1.0).unwrap();
            for (k, w) in [0usize, 1, 10, 100, 500].into_iter().zip(want) {
                assert!(((s.at(k) - w) / w).abs() < 1e-11, "g={g} k={k}: {} vs {w}", s.at(k));
            }
        }
        // 1.05 − 1e-8 before clipping.
        let s = epsilon_schedule_constant_r(1000, 1e-2, 0.05, 1.0).unwrap();
        assert_eq!(s.at(999), 1.0);
        assert_eq!(s.flags[999], ScheduleFlag::Clamped);
    }

    #[test]
    fn general_matches_closed_form_for_constant_drift() {
        let n = 60;
        let (beta, rho, r0) = (1e-3, 0.1, 2.0);
        let closed = epsilon_schedule_constant_r(n, beta, rho, r0).unwrap();
        let general = epsilon_schedule_general(n, beta, &DriftSpec::model_a(rho).unwrap(), &Radii::Constant(r0), &BetaSplit::Even).unwrap();
        for k in 0..=n {
            assert!((closed.at(k) - general.at(k)).abs() < 1e-10, "k={k}");
            assert_eq!(closed.flags[k], general.flags[k], "k={k}");
        }
    }

    #[test]
    fn heterogeneous_radii_frozen_root() {
        // N = 50, k = 3, β = 0.01 (share β/N), ρ(i,51) = 0.1·(51−i)/50,
        // r_i = 1.8 for odd i and 2.4 for even i; 40-digit bisection.
        let n = 50;
        let drift = DriftSpec::model_b(move |i, j| if i == j { 0.0 } else { 0.1 * (n + 1 - i.min(j)) as f64 / n as f64 });
        let radii = Radii::PerScenario((1..=n).map(|i| if i % 2 == 1 { 1.8 } else { 2.4 }).collect());
        let (eps, flag) = epsilon_at_cardinality(n, 3, 0.01 / n as f64, &drift, &radii).unwrap();
        assert_eq!(flag, ScheduleFlag::Exact);
        assert!((eps - 0.348_668_605_602_237).abs() < 1e-10, "{eps}");
        let residual = nonconvex_subset_sum(n, 3, eps, &drift, &radii).unwrap() - 0.01 / n as f64;
        assert!(residual.abs() <= 1e-9, "{residual}");
    }

    #[test]
    fn custom_split_is_validated_and_used() {
        let n = 10;
        let mut w = vec![0.0; n];
        w[2] = 1.0;
        let s = epsilon_schedule_general(n, 0.05, &DriftSpec::stationary(), &Radii::Constant(1.0), &BetaSplit::Custom(w)).unwrap();
        assert_eq!(s.flags[0], ScheduleFlag::NoRoot);
        assert_eq!(s.at(0), 1.0);
        let sum = nonconvex_subset_sum(n, 2, s.at(2), &DriftSpec::stationary(), &Radii::Constant(1.0)).unwrap();
        assert!((sum - 0.05).abs() < 1e-9);
        assert!(epsilon_schedule_general(n, 0.05, &DriftSpec::stationary(), &Radii::Constant(1.0), &BetaSplit::Custom(vec![0.5; n])).is_err());
    }
}
