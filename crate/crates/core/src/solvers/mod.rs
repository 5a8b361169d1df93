//! Exact solvers: the decomposition DP and decomposition-free oracles.

pub mod brute;
pub mod dp;
mod pairwise;

use thiserror::Error;

use crate::decomposition::DecompositionError;
use crate::reductions::{Instance, Kind, Solution};

pub use brute::{brute_force, brute_force_with, BruteOptions};
pub use dp::{solve, solve_instance, solve_with, DpOptions, DEFAULT_STATE_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("invalid-decomposition: {0}")]
    Decomposition(#[from] DecompositionError),
    #[error("state-cap: {states} states exceed the cap of {cap}")]
    StateCap { states: usize, cap: usize },
    #[error("width: {live} live vertices exceed the {max} state slots")]
    WidthTooLarge { live: usize, max: usize },
    #[error("size-cap: {kind} brute force limited to {cap} vertices, instance has {n}")]
    CapExceeded { kind: Kind, n: usize, cap: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    pub max_states: usize,
    pub transitions: u64,
    /// (live-set size, states) after each step.
    pub per_step: Vec<(u32, u64)>,
}

impl Stats {
    /// Steps where the state count exceeds `base^live`.
    pub fn law_violations(&self, base: u64) -> usize {
        self.per_step
            .iter()
            .filter(|&&(live, states)| base.checked_pow(live).is_some_and(|b| states > b))
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Answer {
    /// Optimal objective; feasibility kinds report 1. `None` when infeasible.
    pub optimum: Option<i64>,
    /// Whether the optimum meets the instance target.
    pub verdict: bool,
    pub solution: Option<Solution>,
    pub stats: Stats,
}

impl Answer {
    pub fn new(inst: &Instance, optimum: Option<i64>, solution: Option<Solution>, stats: Stats) -> Self {
        let verdict = optimum.is_some_and(|v| inst.sense.accepts(v, inst.target));
        Answer { optimum, verdict, solution, stats }
    }

    /// `yes <opt>` / `no <opt>`; infeasible instances print `no -`.
    pub fn verdict_line(&self) -> String {
        let word = if self.verdict { "yes" } else { "no" };
        match self.optimum {
            Some(v) => format!("{word} {v}"),
            None => format!("{word} -"),
        }
    }
}
