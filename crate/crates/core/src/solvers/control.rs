//! Quantized finite-horizon control under sampled system matrices.
//!
//! Minimize `h = max_i ‖A_(i)^T x0 + R_(i) u‖_∞` over input sequences in
//! `𝒰^T`. Sequences are stored in time order `u(0), …, u(T−1)`; the
//! coefficient of `u(t)` is `A^{T−1−t} B`, i.e. column `T−1−t` of `R`.
//! Among minimizers the lexicographically smallest sequence (in time
//! order) is returned.
//!
//! Both strategies accumulate the terminal state left to right over `t`
//! with the same arithmetic, so equal sequences always produce
//! bit-identical objectives.

use std::cmp::Ordering;

use nalgebra::{Matrix2, Matrix2xX, Vector2};
use rayon::prelude::*;

use super::invariant::ScenarioProblem;
use super::montecarlo::Decision;
use crate::error::{domain, Error, Result};

/// Largest `|𝒰|^T` accepted by exhaustive search.
pub const EXHAUSTIVE_LIMIT: f64 = 1e7;

/// Scenarios added to the working set per round of branch and bound.
const CUT_BATCH: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Exhaustive,
    BranchAndBound,
}

impl Strategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::BranchAndBound => "branch_and_bound",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "branch_and_bound" | "bnb" => Ok(Strategy::BranchAndBound),
            other => Err(Error::Config(format!("unknown strategy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControlInstance {
    pub horizon: usize,
    pub initial_state: Vector2<f64>,
    /// Sorted, deduplicated.
    pub input_set: Vec<f64>,
    pub b: Vector2<f64>,
    pub scenarios: Vec<Matrix2<f64>>,
}

impl ControlInstance {
    pub fn new(
        horizon: usize,
        initial_state: Vector2<f64>,
        mut input_set: Vec<f64>,
        b: Vector2<f64>,
        scenarios: Vec<Matrix2<f64>>,
    ) -> Result<Self> {
        if horizon == 0 {
            return Err(domain("horizon must be at least 1"));
        }
        if input_set.is_empty() || input_set.iter().any(|u| !u.is_finite()) {
            return Err(domain("input set must be non-empty and finite"));
        }
        input_set.sort_by(f64::total_cmp);
        input_set.dedup();
        let finite = initial_state.iter().chain(b.iter()).all(|x| x.is_finite())
            && scenarios.iter().all(|a| a.iter().all(|x| x.is_finite()));
        if !finite {
            return Err(domain("system data must be finite"));
        }
        Ok(Self { horizon, initial_state, input_set, b, scenarios })
    }

    /// `x0 = [1, 1]`, `B = [0, 0.5]`, `𝒰 = {−5, …, 5}`.
    pub fn with_defaults(horizon: usize, scenarios: Vec<Matrix2<f64>>) -> Result<Self> {
        Self::new(horizon, Self::default_x0(), Self::default_inputs(), Self::default_b(), scenarios)
    }

    pub fn default_x0() -> Vector2<f64> {
        Vector2::new(1.0, 1.0)
    }

    pub fn default_b() -> Vector2<f64> {
        Vector2::new(0.0, 0.5)
    }

    pub fn default_inputs() -> Vec<f64> {
        (-5..=5).map(f64::from).collect()
    }

    pub fn n_scenarios(&self) -> usize {
        self.scenarios.len()
    }

    /// `|𝒰|^T` as a float.
    pub fn search_space(&self) -> f64 {
        (self.input_set.len() as f64).powi(self.horizon as i32)
    }

    /// `‖A^T x0 + R u‖_∞` for an arbitrary system matrix.
    pub fn terminal_norm(&self, a: &Matrix2<f64>, inputs: &[f64]) -> f64 {
        Compiled::new(a, self).terminal(inputs).amax()
    }

    /// Objective over the 1-based scenario `indices`.
    pub fn objective_on(&self, indices: &[usize], inputs: &[f64]) -> f64 {
        indices
            .iter()
            .map(|&i| self.terminal_norm(&self.scenarios[i - 1], inputs))
            .fold(0.0, f64::max)
    }

    /// Pairs a solution with this instance so it can be tested against new
    /// system matrices.
    pub fn decision<'a>(&'a self, solution: &'a ControlSolution) -> ControlDecision<'a> {
        ControlDecision { instance: self, solution }
    }
}

/// `R = [B, AB, …, A^{T−1}B]` for scenario `i` (1-based).
pub fn build_reachability(instance: &ControlInstance, i: usize) -> Matrix2xX<f64> {
    let a = instance.scenarios[i - 1];
    let mut r = Matrix2xX::zeros(instance.horizon);
    let mut col = instance.b;
    for j in 0..instance.horizon {
        r.set_column(j, &col);
        col = a * col;
    }
    r
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControlSolution {
    /// `u(0), …, u(T−1)`.
    pub input_sequence: Vec<f64>,
    pub objective: f64,
}

impl ControlSolution {
    fn better_than(&self, other: &ControlSolution) -> bool {
        match self.objective.total_cmp(&other.objective) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => lex_less(&self.input_sequence, &other.input_sequence),
        }
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Less => return true,
            Ordering::Greater => return false,
            Ordering::Equal => {}
        }
    }
    false
}

/// A control solution bound to its instance.
#[derive(Debug, Clone, Copy)]
pub struct ControlDecision<'a> {
    pub instance: &'a ControlInstance,
    pub solution: &'a ControlSolution,
}

impl Decision<Matrix2<f64>> for ControlDecision<'_> {
    fn violated_by(&self, a: &Matrix2<f64>) -> bool {
        self.instance.terminal_norm(a, &self.solution.input_sequence) > self.solution.objective
    }
}

/// Per-scenario data: free response, input coefficients in time order, and
/// suffix sums of the extreme contributions of the remaining inputs.
#[derive(Debug, Clone)]
struct Compiled {
    free: Vector2<f64>,
    coef: Vec<Vector2<f64>>,
    suffix_lo: Vec<Vector2<f64>>,
    suffix_hi: Vec<Vector2<f64>>,
}

impl Compiled {
    fn new(a: &Matrix2<f64>, inst: &ControlInstance) -> Self {
        let t = inst.horizon;
        let mut powers_b = Vec::with_capacity(t);
        let mut col = inst.b;
        let mut power = Matrix2::identity();
        for _ in 0..t {
            powers_b.push(col);
            col = a * col;
            power = a * power;
        }
        let free = power * inst.initial_state;
        let coef: Vec<Vector2<f64>> = (0..t).map(|s| powers_b[t - 1 - s]).collect();
        let (umin, umax) = (inst.input_set[0], inst.input_set[inst.input_set.len() - 1]);
        let mut suffix_lo = vec![Vector2::zeros(); t + 1];
        let mut suffix_hi = vec![Vector2::zeros(); t + 1];
        for s in (0..t).rev() {
            for c in 0..2 {
                let (p, q) = (coef[s][c] * umin, coef[s][c] * umax);
                suffix_lo[s][c] = suffix_lo[s + 1][c] + p.min(q);
                suffix_hi[s][c] = suffix_hi[s + 1][c] + p.max(q);
            }
        }
        Self { free, coef, suffix_lo, suffix_hi }
    }

    fn terminal(&self, inputs: &[f64]) -> Vector2<f64> {
        let mut x = self.free;
        for (g, u) in self.coef.iter().zip(inputs) {
            x += g * *u;
        }
        x
    }

    /// Lower bound on `‖x(T)‖_∞` given the partial state after `depth` inputs.
    fn lower_bound(&self, partial: &Vector2<f64>, depth: usize) -> f64 {
        let mut lb = 0.0f64;
        for c in 0..2 {
            let lo = partial[c] + self.suffix_lo[depth][c];
            let hi = partial[c] + self.suffix_hi[depth][c];
            let gap = if lo > 0.0 {
                lo
            } else if hi < 0.0 {
                -hi
            } else {
                0.0
            };
            lb = lb.max(gap);
        }
        lb
    }
}

/// Compiled instance restricted to a scenario subset.
struct Search<'a> {
    inst: &'a ControlInstance,
    scen: Vec<&'a Compiled>,
}

impl Search<'_> {
    fn horizon(&self) -> usize {
        self.inst.horizon
    }

    fn objective(&self, inputs: &[f64]) -> f64 {
        self.scen.iter().map(|c| c.terminal(inputs).amax()).fold(0.0, f64::max)
    }

    fn initial_partials(&self) -> Vec<Vector2<f64>> {
        self.scen.iter().map(|c| c.free).collect()
    }

    fn advance(&self, partials: &[Vector2<f64>], depth: usize, u: f64, out: &mut Vec<Vector2<f64>>) {
        out.clear();
        out.extend(self.scen.iter().zip(partials).map(|(c, x)| x + c.coef[depth] * u));
    }

    fn leaf_value(partials: &[Vector2<f64>]) -> f64 {
        partials.iter().map(|x| x.amax()).fold(0.0, f64::max)
    }
}

fn prune_threshold(best: f64) -> f64 {
    best + 1e-9 * (1.0 + best.abs())
}

/// Exhaustive depth-first enumeration below a fixed prefix, in lexicographic order.
fn exhaustive_from(search: &Search, prefix: &mut Vec<f64>, partials: Vec<Vector2<f64>>, best: &mut Option<ControlSolution>) {
    let depth = prefix.len();
    if depth == search.horizon() {
        let value = Search::leaf_value(&partials);
        if best.as_ref().is_none_or(|b| value < b.objective) {
            *best = Some(ControlSolution { input_sequence: prefix.clone(), objective: value });
        }
        return;
    }
    let mut next = Vec::with_capacity(partials.len());
    for &u in &search.inst.input_set {
        search.advance(&partials, depth, u, &mut next);
        prefix.push(u);
        exhaustive_from(search, prefix, std::mem::take(&mut next), best);
        prefix.pop();
        next = Vec::with_capacity(partials.len());
    }
}

/// Largest suffix table built for the split bound.
const SUFFIX_TABLE_LIMIT: usize = 1 << 20;

/// Discrete completions of one pivot scenario over the last inputs, sorted
/// by their first coordinate.
struct SuffixTable {
    split: usize,
    pivot: usize,
    entries: Vec<(Vector2<f64>, u32)>,
}

impl SuffixTable {
    fn new(search: &Search, pivot: usize) -> Self {
        let inputs = &search.inst.input_set;
        let t = search.horizon();
        let mut len = 0;
        let mut size = 1usize;
        while len < t.div_ceil(2) && size * inputs.len() <= SUFFIX_TABLE_LIMIT {
            size *= inputs.len();
            len += 1;
        }
        let split = t - len;
        let coef = &search.scen[pivot].coef[split..];
        let mut entries: Vec<(Vector2<f64>, u32)> = (0..size)
            .map(|code| {
                let mut q = Vector2::zeros();
                for (g, u) in coef.iter().zip(decode(code as u32, len, inputs)) {
                    q += g * u;
                }
                (q, code as u32)
            })
            .collect();
        entries.sort_by(|a, b| a.0[0].total_cmp(&b.0[0]).then(a.1.cmp(&b.1)));
        Self { split, pivot, entries }
    }

    fn suffix_len(&self, horizon: usize) -> usize {
        horizon - self.split
    }

    /// Codes of completions keeping the pivot inside the `threshold` box.
    fn candidates<'t>(&'t self, x: &Vector2<f64>, threshold: f64) -> impl Iterator<Item = u32> + 't {
        let (lo, hi) = (-threshold - x[0], threshold - x[0]);
        let (lo2, hi2) = (-threshold - x[1], threshold - x[1]);
        let start = self.entries.partition_point(|e| e.0[0] < lo);
        self.entries[start..]
            .iter()
            .take_while(move |e| e.0[0] <= hi)
            .filter(move |e| lo2 <= e.0[1] && e.0[1] <= hi2)
            .map(|e| e.1)
    }
}

/// Suffix code in time order; the first input is the most significant digit.
fn decode(code: u32, len: usize, inputs: &[f64]) -> impl Iterator<Item = f64> + '_ {
    let base = inputs.len() as u32;
    (0..len).map(move |k| inputs[((code / base.pow((len - 1 - k) as u32)) % base) as usize])
}

struct BnbState {
    best: ControlSolution,
    rotor: usize,
    scratch: Vec<Vec<Vector2<f64>>>,
    prefix: Vec<f64>,
    suffix: Vec<f64>,
}

impl BnbState {
    fn threshold(&self) -> f64 {
        prune_threshold(self.best.objective)
    }
}

impl Search<'_> {
    /// Expands the child `u` of a node at `depth` into `st.scratch[depth + 1]`
    /// unless some scenario proves it cannot beat the incumbent. The
    /// scenario that pruned last is tried first.
    fn expand(&self, st: &mut BnbState, depth: usize, u: f64) -> bool {
        let threshold = st.threshold();
        let n = self.scen.len();
        let (head, tail) = st.scratch.split_at_mut(depth + 1);
        let parent = &head[depth];
        for off in 0..n {
            let k = (st.rotor + off) % n;
            let x = parent[k] + self.scen[k].coef[depth] * u;
            if self.scen[k].lower_bound(&x, depth + 1) > threshold {
                st.rotor = k;
                return false;
            }
        }
        self.advance(parent, depth, u, &mut tail[0]);
        true
    }

    /// Follows the child with the smallest worst-case bound at each depth,
    /// giving a first incumbent.
    fn dive(&self) -> ControlSolution {
        let t = self.horizon();
        let mut partials = self.initial_partials();
        let mut next = Vec::with_capacity(partials.len());
        let mut inputs = Vec::with_capacity(t);
        for depth in 0..t {
            let mut choice = (f64::INFINITY, self.inst.input_set[0]);
            for &u in &self.inst.input_set {
                self.advance(&partials, depth, u, &mut next);
                let lb = self
                    .scen
                    .iter()
                    .zip(&next)
                    .map(|(c, x)| c.lower_bound(x, depth + 1))
                    .fold(0.0, f64::max);
                if lb < choice.0 {
                    choice = (lb, u);
                }
            }
            self.advance(&partials, depth, choice.1, &mut next);
            std::mem::swap(&mut partials, &mut next);
            inputs.push(choice.1);
        }
        ControlSolution { objective: Search::leaf_value(&partials), input_sequence: inputs }
    }

    /// Objective of completing the node state `partials` with `suffix`,
    /// or `None` once it exceeds `cap`. Accumulates exactly like
    /// [`Compiled::terminal`].
    fn complete(&self, partials: &[Vector2<f64>], split: usize, suffix: &[f64], cap: f64, rotor: &mut usize) -> Option<f64> {
        let n = self.scen.len();
        let mut value = 0.0f64;
        for off in 0..n {
            let k = (*rotor + off) % n;
            let mut x = partials[k];
            for (g, u) in self.scen[k].coef[split..].iter().zip(suffix) {
                x += g * *u;
            }
            value = value.max(x.amax());
            if value > cap {
                *rotor = k;
                return None;
            }
        }
        Some(value)
    }
}

fn bnb_from(search: &Search, table: &SuffixTable, depth: usize, st: &mut BnbState) {
    if depth == table.split {
        let len = table.suffix_len(search.horizon());
        let partials = std::mem::take(&mut st.scratch[depth]);
        let codes: Vec<u32> = table.candidates(&partials[table.pivot], st.threshold()).collect();
        for code in codes {
            st.suffix.clear();
            st.suffix.extend(decode(code, len, &search.inst.input_set));
            let mut rotor = st.rotor;
            let cap = st.best.objective;
            if let Some(value) = search.complete(&partials, depth, &st.suffix, cap, &mut rotor) {
                let mut inputs = st.prefix.clone();
                inputs.extend_from_slice(&st.suffix);
                let candidate = ControlSolution { input_sequence: inputs, objective: value };
                if candidate.better_than(&st.best) {
                    st.best = candidate;
                }
            }
            st.rotor = rotor;
        }
        st.scratch[depth] = partials;
        return;
    }
    for &u in &search.inst.input_set {
        if search.expand(st, depth, u) {
            st.prefix.push(u);
            bnb_from(search, table, depth + 1, st);
            st.prefix.pop();
        }
    }
}

fn branch_and_bound(search: &Search, hint: Option<&ControlSolution>) -> ControlSolution {
    let t = search.horizon();
    let dived = search.dive();
    let incumbent = match hint.filter(|h| h.input_sequence.len() == t) {
        Some(h) => {
            let hinted = ControlSolution { input_sequence: h.input_sequence.clone(), objective: search.objective(&h.input_sequence) };
            if dived.better_than(&hinted) { dived } else { hinted }
        }
        None => dived,
    };
    let pivot = search
        .scen
        .iter()
        .enumerate()
        .map(|(k, c)| (c.terminal(&incumbent.input_sequence).amax(), k))
        .fold((f64::NEG_INFINITY, 0), |a, b| if b.0 > a.0 { b } else { a })
        .1;
    let table = SuffixTable::new(search, pivot);
    let root = search.initial_partials();
    let mut scratch = vec![Vec::with_capacity(root.len()); t + 1];
    scratch[0] = root;
    let mut st = BnbState { best: incumbent, rotor: pivot, scratch, prefix: Vec::with_capacity(t), suffix: Vec::with_capacity(t) };
    bnb_from(search, &table, 0, &mut st);
    st.best
}

fn run(search: &Search, strategy: Strategy, hint: Option<&ControlSolution>) -> Result<ControlSolution> {
    if search.scen.is_empty() {
        return Err(domain("control problem needs at least one scenario"));
    }
    let best = match strategy {
        Strategy::Exhaustive => {
            let space = search.inst.search_space();
            if space > EXHAUSTIVE_LIMIT {
                return Err(Error::Capacity {
                    what: "exhaustive input sequences",
                    required: space,
                    limit: EXHAUSTIVE_LIMIT,
                    hint: "use the branch_and_bound strategy",
                });
            }
            let root = search.initial_partials();
            search
                .inst
                .input_set
                .par_iter()
                .map(|&u| {
                    let mut next = Vec::new();
                    search.advance(&root, 0, u, &mut next);
                    let mut prefix = vec![u];
                    let mut best = None;
                    exhaustive_from(search, &mut prefix, next, &mut best);
                    best
                })
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .reduce(|a, b| if b.better_than(&a) { b } else { a })
                .expect("search visits at least one sequence")
        }
        Strategy::BranchAndBound => branch_and_bound(search, hint),
    };
    // Report the objective through the reference evaluation.
    let objective = search.objective(&best.input_sequence);
    debug_assert_eq!(objective, best.objective);
    Ok(ControlSolution { objective, ..best })
}

pub fn solve_control(instance: &ControlInstance, strategy: Strategy) -> Result<ControlSolution> {
    ControlProblem::new(instance, strategy).solve_all()
}

/// Control problem with per-scenario data prepared once, for repeated
/// solves on scenario subsets.
pub struct ControlProblem<'a> {
    instance: &'a ControlInstance,
    strategy: Strategy,
    compiled: Vec<Compiled>,
}

impl<'a> ControlProblem<'a> {
    pub fn new(instance: &'a ControlInstance, strategy: Strategy) -> Self {
        let compiled = instance.scenarios.iter().map(|a| Compiled::new(a, instance)).collect();
        Self { instance, strategy, compiled }
    }

    pub fn instance(&self) -> &ControlInstance {
        self.instance
    }

    pub fn solve_all(&self) -> Result<ControlSolution> {
        let all: Vec<usize> = (1..=self.compiled.len()).collect();
        self.solve_subset(&all, None)
    }

    pub fn solve_with(&self, indices: &[usize], strategy: Strategy, hint: Option<&ControlSolution>) -> Result<ControlSolution> {
        match strategy {
            Strategy::Exhaustive => run(&self.search(indices), strategy, hint),
            Strategy::BranchAndBound => self.solve_by_cuts(indices, hint),
        }
    }

    fn search(&self, indices: &[usize]) -> Search<'_> {
        Search { inst: self.instance, scen: indices.iter().map(|&i| &self.compiled[i - 1]).collect() }
    }

    fn value(&self, i: usize, inputs: &[f64]) -> f64 {
        self.compiled[i - 1].terminal(inputs).amax()
    }

    /// Branch and bound on a growing working subset of `indices`.
    ///
    /// The working problem is a relaxation, so once its lexicographically
    /// smallest minimizer attains the same objective on all of `indices` it
    /// is also the tie-broken minimizer there. Otherwise the worst violated
    /// scenarios join the working set.
    fn solve_by_cuts(&self, indices: &[usize], hint: Option<&ControlSolution>) -> Result<ControlSolution> {
        if indices.is_empty() {
            return Err(domain("control problem needs at least one scenario"));
        }
        let start = match hint.filter(|h| h.input_sequence.len() == self.instance.horizon) {
            Some(h) => h.input_sequence.clone(),
            None => self.search(indices).dive().input_sequence,
        };
        let mut working = self.worst(indices, &start, CUT_BATCH, f64::NEG_INFINITY);
        let mut hint = hint.cloned();
        loop {
            let sol = run(&self.search(&working), Strategy::BranchAndBound, hint.as_ref())?;
            let violated = self.worst(indices, &sol.input_sequence, CUT_BATCH, sol.objective);
            if violated.is_empty() {
                return Ok(sol);
            }
            working.extend(violated);
            working.sort_unstable();
            hint = Some(sol);
        }
    }

    /// Up to `count` indices with the largest values at `inputs` above `floor`.
    fn worst(&self, indices: &[usize], inputs: &[f64], count: usize, floor: f64) -> Vec<usize> {
        let mut scored: Vec<(f64, usize)> = indices
            .iter()
            .map(|&i| (self.value(i, inputs), i))
            .filter(|(v, _)| *v > floor)
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        scored.into_iter().take(count).map(|(_, i)| i).collect()
    }
}

impl ScenarioProblem for ControlProblem<'_> {
    type Solution = ControlSolution;

    fn n_scenarios(&self) -> usize {
        self.compiled.len()
    }

    fn solve_subset(&self, indices: &[usize], hint: Option<&ControlSolution>) -> Result<ControlSolution> {
        self.solve_with(indices, self.strategy, hint)
    }

    fn same_solution(a: &ControlSolution, b: &ControlSolution) -> bool {
        a == b
    }

    /// A scenario that alone attains the objective lowers it when dropped.
    fn removal_changes(&self, remaining: &[usize], removed: usize, solution: &ControlSolution) -> bool {
        let value = |i: usize| self.compiled[i - 1].terminal(&solution.input_sequence).amax();
        value(removed) == solution.objective && remaining.iter().all(|&i| value(i) < solution.objective)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drift::MatrixGaussianDrift;

    fn abar() -> Matrix2<f64> {
        MatrixGaussianDrift::nominal_mean()
    }

    fn sampled(t: usize, n: usize, seed: u64) -> ControlInstance {
        let family = MatrixGaussianDrift::constant(n, abar(), 0.02).unwrap();
        ControlInstance::with_defaults(t, family.sample_control_scenarios(n, seed).unwrap()).unwrap()
    }

    #[test]
    fn reachability_special_cases() {
        let zero = ControlInstance::with_defaults(3, vec![Matrix2::zeros()]).unwrap();
        let r = build_reachability(&zero, 1);
        assert_eq!(r.column(0), ControlInstance::default_b());
        assert!(r.column(1).iter().chain(r.column(2).iter()).all(|x| *x == 0.0));
        let id = ControlInstance::with_defaults(4, vec![Matrix2::identity()]).unwrap();
        let r = build_reachability(&id, 1);
        for j in 0..4 {
            assert_eq!(r.column(j), ControlInstance::default_b());
        }
    }

    #[test]
    fn reachability_nominal_matrix() {
        // B, ĀB, Ā²B at T = 3.
        let inst = ControlInstance::with_defaults(3, vec![abar()]).unwrap();
        let r = build_reachability(&inst, 1);
        let want = [[0.0, 0.5], [-0.5, -0.45], [0.05, 0.405]];
        for (j, w) in want.iter().enumerate() {
            assert!((r[(0, j)] - w[0]).abs() < 1e-15 && (r[(1, j)] - w[1]).abs() < 1e-15, "column {j}");
        }
    }

    #[test]
    fn single_step_scan() {
        // Āx0 = [−0.2, −0.9]; u = 2 gives [−0.2, 0.1].
        let inst = ControlInstance::with_defaults(1, vec![abar()]).unwrap();
        for strategy in [Strategy::Exhaustive, Strategy::BranchAndBound] {
            let s = solve_control(&inst, strategy).unwrap();
            assert_eq!(s.input_sequence, vec![2.0]);
            assert!((s.objective - 0.2).abs() < 1e-15);
        }
    }

    #[test]
    fn singleton_input_set() {
        let inst = sampled(3, 5, 1);
        let inst = ControlInstance::new(3, inst.initial_state, vec![0.0], inst.b, inst.scenarios).unwrap();
        let s = solve_control(&inst, Strategy::BranchAndBound).unwrap();
        assert_eq!(s.input_sequence, vec![0.0; 3]);
        let want = inst
            .scenarios
            .iter()
            .map(|a| (a * a * a * inst.initial_state).amax())
            .fold(0.0, f64::max);
        assert!((s.objective - want).abs() < 1e-15);
    }

    #[test]
    fn nominal_three_steps_reaches_a_small_state() {
        // Ā³x0 = [−0.218, −0.729].
        let inst = ControlInstance::with_defaults(3, vec![abar()]).unwrap();
        let s = solve_control(&inst, Strategy::Exhaustive).unwrap();
        assert!(s.objective < (Vector2::new(-0.218, -0.729)).amax());
        assert_eq!(inst.objective_on(&[1], &s.input_sequence), s.objective);
    }

    #[test]
    fn exhaustive_guard_names_branch_and_bound() {
        let inst = ControlInstance::with_defaults(8, vec![abar()]).unwrap();
        match solve_control(&inst, Strategy::Exhaustive) {
            Err(Error::Capacity { hint, .. }) => assert!(hint.contains("branch_and_bound")),
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn strategies_agree_at_t4() {
        for seed in [3, 17] {
            let inst = sampled(4, 50, seed);
            let ex = solve_control(&inst, Strategy::Exhaustive).unwrap();
            let bb = solve_control(&inst, Strategy::BranchAndBound).unwrap();
            assert_eq!(ex, bb);
        }
    }

    #[test]
    fn ties_resolve_lexicographically() {
        // With A = 0 only u(T−1) matters; u(0..T−1) tie and must be the smallest element.
        let inst = ControlInstance::with_defaults(3, vec![Matrix2::zeros()]).unwrap();
        for strategy in [Strategy::Exhaustive, Strategy::BranchAndBound] {
            let s = solve_control(&inst, strategy).unwrap();
            assert_eq!(s.input_sequence, vec![-5.0, -5.0, 0.0]);
            assert_eq!(s.objective, 0.0);
        }
    }

    #[test]
    fn hint_does_not_change_result() {
        let inst = sampled(4, 20, 5);
        let p = ControlProblem::new(&inst, Strategy::BranchAndBound);
        let all: Vec<usize> = (1..=20).collect();
        let plain = p.solve_subset(&all, None).unwrap();
        let bad_hint = ControlSolution { input_sequence: vec![5.0; 4], objective: 0.0 };
        assert_eq!(p.solve_subset(&all, Some(&bad_hint)).unwrap(), plain);
        assert_eq!(p.solve_subset(&all, Some(&plain)).unwrap(), plain);
    }

    #[test]
    fn adding_scenarios_never_lowers_the_objective() {
        let inst = sampled(3, 30, 9);
        let p = ControlProblem::new(&inst, Strategy::Exhaustive);
        let mut prev = 0.0;
        for m in [1, 5, 12, 30] {
            let idx: Vec<usize> = (1..=m).collect();
            let s = p.solve_subset(&idx, None).unwrap();
            assert!(s.objective >= prev);
            prev = s.objective;
        }
    }

    #[test]
    fn invariant_set_contract_small_control() {
        use crate::solvers::invariant::{invariant_set, verify_invariant_set};
        let inst = sampled(3, 12, 4);
        for strategy in [Strategy::Exhaustive, Strategy::BranchAndBound] {
            let p = ControlProblem::new(&inst, strategy);
            let inv = invariant_set(&p).unwrap();
            assert_eq!(inv.solution, solve_control(&inst, Strategy::Exhaustive).unwrap());
            assert!(verify_invariant_set(&p, &inv).unwrap());
        }
    }

    use proptest::prelude::{prop, prop_assert_eq, proptest, ProptestConfig};
    use proptest::strategy::Strategy as Gen;

    fn matrix() -> impl Gen<Value = Matrix2<f64>> {
        prop::array::uniform4(-12i32..12).prop_map(|e| Matrix2::new(e[0] as f64 / 10.0, e[1] as f64 / 10.0, e[2] as f64 / 10.0, e[3] as f64 / 10.0))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn branch_and_bound_matches_exhaustive(
            t in 1usize..5,
            scenarios in prop::collection::vec(matrix(), 1..8),
            inputs in prop::collection::btree_set(-4i32..5, 1..6),
        ) {
            let inputs: Vec<f64> = inputs.into_iter().map(f64::from).collect();
            let inst = ControlInstance::new(t, ControlInstance::default_x0(), inputs, ControlInstance::default_b(), scenarios).unwrap();
            let ex = solve_control(&inst, Strategy::Exhaustive).unwrap();
            let bb = solve_control(&inst, Strategy::BranchAndBound).unwrap();
            prop_assert_eq!(&ex, &bb);
            prop_assert_eq!(inst.objective_on(&(1..=inst.n_scenarios()).collect::<Vec<_>>(), &ex.input_sequence), ex.objective);
        }
    }
}
