//! Scenario approach to chance-constrained optimization when the scenarios
//! are drawn from a drifting sequence of distributions.
//!
//! The crate is organised around five pieces:
//!
//! - [`drift`]: time-indexed scenario-generating families and their
//!   Wasserstein drift descriptions (Model A: one scalar bound, Model B: a
//!   per-pair bound function).
//! - [`wasserstein`]: 1-Wasserstein distances in one dimension, closed form
//!   and by quadrature of the CDF gap.
//! - [`risk`]: violation-probability certificates, sample-size inversion
//!   and the a-posteriori `ε(k)` schedules.
//! - [`solvers`]: the robust interval-covering problem, quantized-input
//!   control, invariant-set extraction and Monte Carlo violation estimates.
//! - [`experiments`]: seeded end-to-end pipelines that emit CSV tables; the
//!   `scenario-drift` binary is a thin front end over them.
//!
//! Indices of scenarios and of drift steps are 1-based throughout the public
//! API, matching the usual `ξ_1 .. ξ_N` notation; the evaluation measure is
//! the one at step `N + 1`.

pub mod drift;
pub mod error;
pub mod experiments;
pub mod risk;
pub mod rng;
pub mod solvers;
pub mod wasserstein;

pub use error::{Error, Result};
