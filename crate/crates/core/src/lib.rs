//! Sequential adaptive cubic regularization for equality-constrained
//! nonlinear programming:
//!
//! ```text
//! min f(x)  subject to  c(x) = 0
//! ```
//!
//! Each iteration takes a composite step `d = v + Z u`. The vertical step `v`
//! reduces the linearized infeasibility; the horizontal step `Z u` minimizes a
//! cubic-regularized model in the null space of the constraint Jacobian. A
//! single Lanczos process yields CG solutions for a whole ladder of shifts,
//! and the shift acts as the cubic regularization multiplier.
//!
//! ```
//! use ssarc::{find_builtin, solve, SolverConfig};
//!
//! let p = find_builtin("HS28").unwrap();
//! let report = solve(&p, &SolverConfig::default()).unwrap();
//! assert!(report.converged());
//! assert!(report.res <= 1e-8);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod linalg;
pub mod merit;
pub mod problem;
pub mod shifted_cg;
pub mod solver;
pub mod step;
pub mod subproblem;

pub use error::{Error, Result};
pub use problem::{builtin_collection, check_derivatives, find_builtin, Problem, TestProblem};
pub use solver::{
    kkt_residual, solve, solve_with_observer, IterateState, SolverConfig, SolverReport, SolverStatus,
    TrialRecord, TrialView,
};
