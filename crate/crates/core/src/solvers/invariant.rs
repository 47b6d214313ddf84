//! A-posteriori invariant sets by greedy descent.

use crate::error::{Error, Result};

/// A scenario program that can be re-solved on index subsets.
pub trait ScenarioProblem {
    type Solution: Clone + std::fmt::Debug;

    fn n_scenarios(&self) -> usize;

    /// Solves on the 1-based `indices`. `hint` is a known good decision the
    /// solver may use to seed its search; it must not change the result.
    fn solve_subset(&self, indices: &[usize], hint: Option<&Self::Solution>) -> Result<Self::Solution>;

    /// Exact equality of decision and objective.
    fn same_solution(a: &Self::Solution, b: &Self::Solution) -> bool;

    /// Cheap proof that dropping `removed` from `remaining ∪ {removed}`
    /// changes `solution`. Returning `false` just means "re-solve".
    fn removal_changes(&self, _remaining: &[usize], _removed: usize, _solution: &Self::Solution) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSet<S> {
    /// Sorted 1-based indices.
    pub indices: Vec<usize>,
    /// Solution on the full scenario set, reproduced on `indices`.
    pub solution: S,
}

impl<S> InvariantSet<S> {
    pub fn cardinality(&self) -> usize {
        self.indices.len()
    }
}

/// Removes indices in ascending order while the solution stays unchanged,
/// repeating passes until none can be removed.
pub fn invariant_set<P: ScenarioProblem>(problem: &P) -> Result<InvariantSet<P::Solution>> {
    let all: Vec<usize> = (1..=problem.n_scenarios()).collect();
    let solution = problem.solve_subset(&all, None)?;
    let again = problem.solve_subset(&all, Some(&solution))?;
    if !P::same_solution(&solution, &again) {
        return Err(Error::Consistency(format!(
            "re-solving the unchanged scenario set gave {again:?} instead of {solution:?}"
        )));
    }

    let mut current = all;
    loop {
        let mut removed_any = false;
        let mut pos = 0;
        while pos < current.len() && current.len() > 1 {
            let mut trial = current.clone();
            let removed = trial.remove(pos);
            if problem.removal_changes(&trial, removed, &solution) {
                pos += 1;
                continue;
            }
            let s = problem.solve_subset(&trial, Some(&solution))?;
            if P::same_solution(&s, &solution) {
                current = trial;
                removed_any = true;
            } else {
                pos += 1;
            }
        }
        if !removed_any {
            break;
        }
    }
    Ok(InvariantSet { indices: current, solution })
}

/// Checks both invariant-set properties directly: the subset reproduces
/// `full`, and no single deletion does.
pub fn verify_invariant_set<P: ScenarioProblem>(problem: &P, set: &InvariantSet<P::Solution>) -> Result<bool> {
    let all: Vec<usize> = (1..=problem.n_scenarios()).collect();
    let full = problem.solve_subset(&all, None)?;
    let on_subset = problem.solve_subset(&set.indices, None)?;
    if !P::same_solution(&full, &on_subset) {
        return Ok(false);
    }
    if set.indices.len() == 1 {
        return Ok(true);
    }
    for pos in 0..set.indices.len() {
        let mut trial = set.indices.clone();
        trial.remove(pos);
        if P::same_solution(&problem.solve_subset(&trial, None)?, &full) {
            return Ok(false);
        }
    }
    Ok(true)
}
