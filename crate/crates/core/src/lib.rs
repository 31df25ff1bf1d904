//! # hybrid-eq
//!
//! Iterative solvers for finding a point that is simultaneously a solution of
//! an equilibrium problem and a fixed point of a symmetric generalized hybrid
//! mapping, in finite-dimensional Euclidean space.
//!
//! The problem is: given a closed convex set `C`, an equilibrium bifunction
//! `f : C × C → ℝ` (with `f(x, x) = 0`) and a self-mapping `T : C → C`, find
//!
//! ```text
//! x* ∈ C   with   f(x*, y) ≥ 0  for all y ∈ C   and   T x* = x*.
//! ```
//!
//! Three outer iterations are provided, each combining an Ishikawa-type
//! fixed-point step with a different equilibrium step:
//!
//! * [`Variant::Proximal`] -- a proximal point (resolvent) step,
//! * [`Variant::Extragradient`] -- two successive strongly convex programs,
//! * [`Variant::Linesearch`] -- an extragradient step with an Armijo
//!   linesearch followed by a projected subgradient step.
//!
//! Every run carries runtime checks of the inequalities that drive the
//! convergence theory (Fejér monotonicity towards a known solution, the
//! extragradient descent inequality, the linesearch descent inequality), so a
//! misconfigured instance shows up in the [`RunReport`] instead of silently
//! producing garbage.
//!
//! ```rust
//! use hybrid_eq::{bench, run, InnerSolveConfig, ScheduleConfig, StopConfig, Variant};
//!
//! let inst = bench::generate_instance(&bench::GenSpec::new(5, 7)).unwrap();
//! let report = run(
//!     &inst,
//!     Variant::Linesearch,
//!     &ScheduleConfig::default(),
//!     &StopConfig::default(),
//!     &InnerSolveConfig::default(),
//! )
//! .unwrap();
//! assert!(report.converged());
//! assert!(report.invariants.violations().count() == 0);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithms;
pub mod bench;
pub mod diagnostics;
mod error;
pub mod linalg;
pub mod maps;
pub mod model;
pub mod sets;
pub mod subproblems;

pub use algorithms::{
    alg1_step, alg2_step, alg3_step, armijo_search, run, Aux, RunReport, SolverState, StopConfig,
    Termination, TraceRecord, Variant,
};
pub use diagnostics::{ep_residual, InvariantLog, InvariantRecord};
pub use error::{Error, Result};
pub use maps::{DiagonalResolventMap, HybridMap, HybridParams};
pub use model::{
    Bifunction, ProblemInstance, QuadraticBifunction, ScheduleConfig, Sequence, StepParams,
    ZeroBifunction,
};
pub use sets::{BallSet, BoxSet, FeasibleSet};
pub use subproblems::{InnerSolveConfig, StepRule};

/// Dense real vector used for all iterates.
pub type Vector = nalgebra::DVector<f64>;
/// Dense real matrix.
pub type Matrix = nalgebra::DMatrix<f64>;
