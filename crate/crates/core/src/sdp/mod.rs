//! Semidefinite programming: a block-diagonal interior-point solver and the
//! phase-symmetry analysis used to shrink entanglement-witness problems.

pub mod ipm;
pub mod symmetry;

use thiserror::Error;

pub use ipm::{solve, BlockSdp, Entry, IpmOptions, IpmSolution};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("malformed SDP: {0}")]
    InvalidProblem(String),

    #[error(
        "no convergence after {iterations} iterations (best dual objective {best_objective}, primal bound {best_bound})"
    )]
    NonConvergence { iterations: usize, best_objective: f64, best_bound: f64 },

    #[error("numerical breakdown: {0}")]
    NumericalFailure(String),
}
