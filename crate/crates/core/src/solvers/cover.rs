//! Robust interval covering.
//!
//! Find the narrowest interval `[x − γ, x + γ]` containing every observation
//! ball `[η_i − r_i, η_i + r_i]`. The optimum is attached to the two
//! binding scenarios `lo = argmin (η_i − r_i)` and `hi = argmax (η_i + r_i)`:
//!
//! ```text
//! γ = (η_hi − η_lo)/2 + (r_hi + r_lo)/2
//! x = (η_hi + η_lo)/2 + (r_hi − r_lo)/2
//! ```
//!
//! Splitting observation and radius terms this way makes a constant radius
//! `r0` enter additively: with the same binding pair, the robust width is
//! exactly the floating-point sum `γ_static + r0`.

use std::cmp::Ordering;

use super::invariant::ScenarioProblem;
use super::montecarlo::Decision;
use super::scenario::ScenarioSet;
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverSolution {
    pub center: f64,
    pub half_width: f64,
    /// 1-based index of the scenario fixing the lower end.
    pub binding_low: usize,
    /// 1-based index of the scenario fixing the upper end.
    pub binding_high: usize,
}

impl CoverSolution {
    pub fn lower(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn upper(&self) -> f64 {
        self.center + self.half_width
    }

    pub fn contains(&self, xi: f64) -> bool {
        self.lower() <= xi && xi <= self.upper()
    }

    /// Equality of the decision `(x, γ)`, ignoring which scenarios bind.
    pub fn same_decision(&self, other: &Self) -> bool {
        self.center == other.center && self.half_width == other.half_width
    }
}

impl Decision<f64> for CoverSolution {
    fn violated_by(&self, xi: &f64) -> bool {
        !self.contains(*xi)
    }
}

pub fn solve_cover(set: &ScenarioSet<f64>) -> Result<CoverSolution> {
    let all: Vec<usize> = (1..=set.len()).collect();
    solve_cover_subset(set, &all)
}

/// Solves the covering problem restricted to the 1-based `indices`.
///
/// Ties in `η − r` (resp. `η + r`) go to the smaller (larger) observation,
/// then to the smaller index.
pub fn solve_cover_subset(set: &ScenarioSet<f64>, indices: &[usize]) -> Result<CoverSolution> {
    let first = *indices.first().ok_or_else(|| domain("covering needs at least one scenario"))?;
    let eta = set.observations();
    let r = set.radii();
    let lower_key = |i: usize| (eta[i - 1] - r[i - 1], eta[i - 1]);
    let upper_key = |i: usize| (eta[i - 1] + r[i - 1], eta[i - 1]);
    let cmp = |a: (f64, f64), b: (f64, f64)| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1));

    let (mut lo, mut hi) = (first, first);
    for &i in &indices[1..] {
        if cmp(lower_key(i), lower_key(lo)) == Ordering::Less {
            lo = i;
        }
        if cmp(upper_key(i), upper_key(hi)) == Ordering::Greater {
            hi = i;
        }
    }
    let (eta_lo, eta_hi, r_lo, r_hi) = (eta[lo - 1], eta[hi - 1], r[lo - 1], r[hi - 1]);
    Ok(CoverSolution {
        center: (eta_hi + eta_lo) / 2.0 + (r_hi - r_lo) / 2.0,
        half_width: (eta_hi - eta_lo) / 2.0 + (r_hi + r_lo) / 2.0,
        binding_low: lo,
        binding_high: hi,
    })
}

/// Covering problem over a fixed scenario set, for invariant-set extraction.
#[derive(Debug, Clone, Copy)]
pub struct CoverProblem<'a> {
    pub set: &'a ScenarioSet<f64>,
}

impl ScenarioProblem for CoverProblem<'_> {
    type Solution = CoverSolution;

    fn n_scenarios(&self) -> usize {
        self.set.len()
    }

    fn solve_subset(&self, indices: &[usize], _hint: Option<&CoverSolution>) -> Result<CoverSolution> {
        solve_cover_subset(self.set, indices)
    }

    fn same_solution(a: &CoverSolution, b: &CoverSolution) -> bool {
        a.same_decision(b)
    }
}
