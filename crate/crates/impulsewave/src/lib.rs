//! Spectral toolkit for the one-dimensional wave equation on (0, 1) with
//! homogeneous Dirichlet boundary conditions and impulsive velocity forcing.
//!
//! States are held as truncated Fourier sine expansions and propagated exactly
//! mode by mode, so the free flow costs O(N) per evaluation and conserves
//! energy to rounding. On top of that core the crate provides:
//!
//! - [`solver`]: right-hand-side impulses (velocity kicks localized to a
//!   subinterval) applied at isolated times, producing piecewise-smooth
//!   trajectories with a left-continuity convention at the kick times;
//! - [`control`]: truncated-Gramian synthesis of impulse profiles steering the
//!   system to a target, with Tikhonov regularization and a reachability
//!   verdict, plus a unique-continuation certificate for sine expansions
//!   observed on a subinterval;
//! - [`observe`]: velocity observations on a subinterval at a single time,
//!   observability quotients against the weak-norm of the initial state, and
//!   the observation-to-state adjoint construction realizing the duality
//!   pairing;
//! - [`chebyshev`]: Chebyshev polynomials of the second kind, exact integer
//!   coefficients and stable pointwise evaluation, used to cross-check the
//!   sine product identity behind the observability estimates;
//! - [`fd`]: an independent finite-difference (leapfrog) solver used as an
//!   oracle to validate the spectral trajectories against a discretization
//!   that shares no code with the modal path.

pub mod chebyshev;
pub mod control;
mod error;
pub mod fd;
pub mod modal;
pub mod observe;
pub mod solver;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub use control::{
    adjoint_solve, approx_control, build_gramian, regularized_control, unique_continuation_check,
    AlphaStep, ControlOutcome, ControlProblem, GramianOperator, RegularizedControl, StateNorm,
    UcReport,
};
pub use fd::{compare, fd_solve, interior_grid, FdConfig, FdSolution, GridImpulse};
pub use modal::{
    coeffs_from_samples, Field, MassMatrix, ModalState, SubInterval, WeakNormConvention,
};
pub use observe::{
    coefficient_level_bound_check, lambda_operator, modal_observed_energy_full, obs_ratio,
    observation_seminorm_sq, observed_energy, phase_decomposition, sweep_ratio, BoundCheck,
    CoefficientFamily, LambdaPair, ModePhase, ObservabilityReport, ObservationSetup,
};
pub use solver::{solve, ImpulseEvent, ImpulseSchedule, Side, Trajectory};
