use thiserror::Error;

/// Errors shared by all modules of the crate.
///
/// Every variant corresponds to a precondition violation or a numerically
/// unrecoverable situation; recoverable outcomes (e.g. an unreachable control
/// target) are ordinary return values, not errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric input was NaN or infinite.
    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    /// Subinterval bounds must satisfy 0 <= lo < hi <= 1.
    #[error("subinterval must satisfy 0 <= lo < hi <= 1, got lo={lo}, hi={hi}")]
    BadSubInterval { lo: f64, hi: f64 },

    /// Two sequences that must agree in length do not.
    #[error("{what}: expected length {expected}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    /// States must carry at least one mode.
    #[error("state must carry at least one mode")]
    EmptyState,

    /// An impulse time lies outside the open interval (0, horizon).
    #[error("impulse time {time} must lie strictly inside (0, {horizon})")]
    ImpulseTimeOutsideHorizon { time: f64, horizon: f64 },

    /// Impulse times must be strictly increasing with a minimum separation.
    #[error(
        "impulse times must increase by at least {min_gap}: event {index} at {time} follows {previous}"
    )]
    ImpulseTimesTooClose {
        index: usize,
        time: f64,
        previous: f64,
        min_gap: f64,
    },

    /// A sample time fell outside the trajectory's horizon.
    #[error("sample time {time} outside [0, {horizon}]")]
    TimeOutsideHorizon { time: f64, horizon: f64 },

    /// An impulse index addressed a jump the trajectory does not have.
    #[error("jump index {index} out of range: trajectory has {count} impulses")]
    JumpIndexOutOfRange { index: usize, count: usize },

    /// A spatial evaluation point fell outside the domain [0, 1].
    #[error("evaluation point {value} outside [0, 1]")]
    PointOutsideDomain { value: f64 },

    /// Coefficient recovery needs enough interior samples to resolve the modes.
    #[error("uniform grid too coarse: {actual} interior points, need at least {needed}")]
    GridTooCoarse { needed: usize, actual: usize },

    /// The observation/control horizon must exceed the impulse time.
    #[error("horizon {horizon} must exceed the impulse/observation time {tau}")]
    HorizonBeforeTau { tau: f64, horizon: f64 },

    /// A strictly positive parameter was zero or negative.
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },

    /// Operations restricted to the equal-coefficient family got a state
    /// with differing position/velocity coefficients.
    #[error(
        "operation requires equal position and velocity coefficients; mode {mode} has a={a}, b={b}"
    )]
    FamilyMismatch { mode: usize, a: f64, b: f64 },

    /// A ratio against a zero norm was requested.
    #[error("ratio undefined: the state has zero weak norm")]
    ZeroDenominator,

    /// The regularized solve's condition estimate exceeded the trusted range.
    #[error(
        "regularized solve ill-conditioned: condition estimate {cond:.3e} exceeds {limit:.3e}"
    )]
    IllConditioned { cond: f64, limit: f64 },

    /// An impulse time cannot be represented on the finite-difference time
    /// grid within the configured snapping tolerance.
    #[error("impulse time {requested} is {offset:.3e} away from the nearest step, beyond snap tolerance {tol:.3e}")]
    SnapToleranceExceeded {
        requested: f64,
        offset: f64,
        tol: f64,
    },

    /// The explicit scheme requires a Courant number in (0, 1].
    #[error("cfl number must lie in (0, 1], got {value}")]
    BadCfl { value: f64 },

    /// Catch-all for other parameter validation failures.
    #[error("{name}: {message}")]
    InvalidParameter { name: &'static str, message: String },
}
