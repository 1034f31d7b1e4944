//! A primal-dual interior-point solver for block-structured semidefinite
//! programs with linear objectives, complex Hermitian cones, LMI
//! constraints, and full dual extraction.
//!
//! The dual multipliers are first-class citizens here: downstream modules
//! rebuild optimal beamformers from the multipliers of the PSD membership
//! and LMI constraints, so every constraint's dual is returned alongside
//! the primal values.

mod check;
mod compile;
mod dump;
mod error;
mod problem;
mod solution;
mod solver;

pub use check::{check_solution, min_eig, ConstraintReport, SolutionReport};
pub use dump::dump_standard_form;
pub use error::SdpError;
pub use problem::{
    BlockId, Constraint, ConstraintBody, ConstraintId, LinearExpr, LmiExpr, LmiTerm, Relation,
    ScalarId, SdpProblem, SolverConfig,
};
pub use solution::{DualValue, ResidualNorms, SdpSolution, SolveStatus};
pub use solver::solve_sdp;
