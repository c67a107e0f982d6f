//! Projective deformations of group actions on tori, computed numerically in
//! the graph chart of the invariant period domain.

pub mod chart;
pub mod forms;
pub mod neighbor;
pub mod newton;

use serde::Serialize;
use thiserror::Error;

pub use chart::{invariant_kahler_class, zero_two_part, KahlerClass, PeriodChart, PeriodPoint};
pub use forms::{invariant_two_forms, InvariantTwoFormSpace};
pub use neighbor::{find_projective_neighbor, random_torus, DeformationResult};
pub use newton::{newton_solve, NewtonRun};

use crate::hodge::HodgeError;
use crate::polarize::PolarizeError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeformTolerances {
    /// target for ||xi^{0,2}|| at the solution
    pub newton: f64,
    /// required minimum eigenvalue of -i xi(v, v-bar) on U_t
    pub positivity: f64,
    /// bound on the condition number of [U_t | conj U_t]
    pub conditioning: f64,
    pub max_iterations: usize,
}

impl Default for DeformTolerances {
    fn default() -> Self {
        DeformTolerances { newton: 1e-10, positivity: 1e-8, conditioning: 1e6, max_iterations: 30 }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeformError {
    #[error("Newton iteration did not converge after {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("chart is ill-conditioned (condition number {0:e})")]
    IllConditioned(f64),
    #[error("no projective neighbour within the denominator budget: {0}")]
    BudgetExhausted(String),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    Polarize(#[from] PolarizeError),
}
