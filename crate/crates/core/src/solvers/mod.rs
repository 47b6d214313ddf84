//! Robust scenario problems and their a-posteriori analysis.

pub mod control;
pub mod cover;
pub mod invariant;
pub mod montecarlo;
pub mod scenario;

pub use control::{build_reachability, solve_control, ControlInstance, ControlProblem, ControlSolution, Strategy};
pub use cover::{solve_cover, CoverProblem, CoverSolution};
pub use invariant::{invariant_set, InvariantSet, ScenarioProblem};
pub use montecarlo::{coupling_check, estimate_violation, CouplingCheck, Decision, EvalDistribution, ViolationEstimate};
pub use scenario::{Observation, ScenarioSet};
