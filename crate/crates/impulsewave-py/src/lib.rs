//! Python bindings: modal states, impulsive trajectories, observability
//! reports, and regularized steering, exposed as one extension module.

use impulsewave::modal::{Field, MassMatrix, ModalState, SubInterval, WeakNormConvention};
use impulsewave::observe::{CoefficientFamily, ObservationSetup};
use impulsewave::solver::{solve, ImpulseEvent, ImpulseSchedule, Side};
use impulsewave::{approx_control, ControlOutcome, ControlProblem, StateNorm, Trajectory};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn lib_err(e: impulsewave::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_window(omega: (f64, f64)) -> PyResult<SubInterval> {
    SubInterval::new(omega.0, omega.1).map_err(lib_err)
}

fn parse_side(side: &str) -> PyResult<Side> {
    match side {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        other => Err(PyValueError::new_err(format!(
            "side must be 'left' or 'right', got '{other}'"
        ))),
    }
}

fn parse_field(field: &str) -> PyResult<Field> {
    match field {
        "position" => Ok(Field::Position),
        "velocity" => Ok(Field::Velocity),
        other => Err(PyValueError::new_err(format!(
            "field must be 'position' or 'velocity', got '{other}'"
        ))),
    }
}

/// Sine-series state (aₙ, bₙ) of the string: position and velocity
/// coefficients against sin(nπx).
#[pyclass(name = "ModalState", frozen)]
struct PyModalState {
    inner: ModalState,
}

#[pymethods]
impl PyModalState {
    #[new]
    fn new(position: Vec<f64>, velocity: Vec<f64>) -> PyResult<Self> {
        Ok(PyModalState {
            inner: ModalState::new(position, velocity).map_err(lib_err)?,
        })
    }

    #[getter]
    fn position(&self) -> Vec<f64> {
        self.inner.position_coeffs().to_vec()
    }

    #[getter]
    fn velocity(&self) -> Vec<f64> {
        self.inner.velocity_coeffs().to_vec()
    }

    #[getter]
    fn n_modes(&self) -> usize {
        self.inner.n_modes()
    }

    /// Free evolution by `t` (periodic with period 2; exact at whole periods).
    fn propagate(&self, t: f64) -> PyResult<Self> {
        Ok(PyModalState {
            inner: self.inner.propagate(t).map_err(lib_err)?,
        })
    }

    /// ∫₀¹ (uₓ² + uₜ²) dx — conserved by the free flow.
    fn energy(&self) -> f64 {
        self.inner.energy()
    }

    /// Σ(aₙ² + (bₙ/nπ)²) ("coefficient") or half of it ("integral").
    #[pyo3(signature = (convention = "coefficient"))]
    fn weak_norm_sq(&self, convention: &str) -> PyResult<f64> {
        let convention = match convention {
            "coefficient" => WeakNormConvention::Coefficient,
            "integral" => WeakNormConvention::Integral,
            other => {
                return Err(PyValueError::new_err(format!(
                    "convention must be 'coefficient' or 'integral', got '{other}'"
                )))
            }
        };
        Ok(self.inner.weak_norm_sq(convention))
    }

    /// Synthesizes the position or velocity field at points inside [0, 1].
    #[pyo3(signature = (points, field = "position"))]
    fn evaluate(&self, points: Vec<f64>, field: &str) -> PyResult<Vec<f64>> {
        self.inner
            .evaluate(&points, parse_field(field)?)
            .map_err(lib_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "ModalState(position={:?}, velocity={:?})",
            self.inner.position_coeffs(),
            self.inner.velocity_coeffs()
        )
    }
}

/// Piecewise-free trajectory with velocity jumps at impulse times.
#[pyclass(name = "Trajectory", frozen)]
struct PyTrajectory {
    inner: Trajectory,
}

#[pymethods]
impl PyTrajectory {
    #[getter]
    fn horizon(&self) -> f64 {
        self.inner.horizon()
    }

    #[getter]
    fn n_modes(&self) -> usize {
        self.inner.n_modes()
    }

    /// State at time `t`, taking the one-sided limit named by `side`.
    #[pyo3(signature = (t, side = "right"))]
    fn value_at(&self, t: f64, side: &str) -> PyResult<PyModalState> {
        Ok(PyModalState {
            inner: self.inner.value_at(t, parse_side(side)?).map_err(lib_err)?,
        })
    }

    /// How far the k-th event's one-sided limits deviate from the prescribed
    /// jump: (position residual, velocity residual).
    fn jump_residual(&self, k: usize) -> PyResult<(f64, f64)> {
        self.inner.jump_residual(k).map_err(lib_err)
    }

    /// Energy sampled at the given times (right-sided limits).
    fn energy_profile(&self, times: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.energy_profile(&times).map_err(lib_err)
    }
}

/// Integrates the impulsive evolution. Each impulse is a tuple
/// `(time, profile, (lo, hi))`: coefficients of the velocity jump applied
/// through the indicator of the window (lo, hi).
#[pyfunction]
#[pyo3(signature = (initial, horizon, impulses = vec![]))]
fn simulate(
    initial: &PyModalState,
    horizon: f64,
    impulses: Vec<(f64, Vec<f64>, (f64, f64))>,
) -> PyResult<PyTrajectory> {
    let events: Vec<ImpulseEvent> = impulses
        .into_iter()
        .map(|(time, profile, window)| {
            ImpulseEvent::new(time, profile, parse_window(window)?).map_err(lib_err)
        })
        .collect::<PyResult<_>>()?;
    let schedule = ImpulseSchedule::new(horizon, events).map_err(lib_err)?;
    Ok(PyTrajectory {
        inner: solve(&initial.inner, &schedule).map_err(lib_err)?,
    })
}

fn setup_for(
    state: &ModalState,
    tau: f64,
    omega: (f64, f64),
    horizon: Option<f64>,
) -> PyResult<ObservationSetup> {
    ObservationSetup::new(
        tau,
        parse_window(omega)?,
        horizon.unwrap_or(tau + 1.0),
        state.n_modes(),
    )
    .map_err(lib_err)
}

/// ∫_ω uₜ(x, τ)² dx for the freely evolved state.
#[pyfunction]
#[pyo3(signature = (state, tau, omega, horizon = None))]
fn observed_energy(
    state: &PyModalState,
    tau: f64,
    omega: (f64, f64),
    horizon: Option<f64>,
) -> PyResult<f64> {
    impulsewave::observed_energy(&state.inner, &setup_for(&state.inner, tau, omega, horizon)?)
        .map_err(lib_err)
}

/// Observed energy divided by the squared weak norm (coefficient convention).
#[pyfunction]
#[pyo3(signature = (state, tau, omega, horizon = None))]
fn obs_ratio(
    state: &PyModalState,
    tau: f64,
    omega: (f64, f64),
    horizon: Option<f64>,
) -> PyResult<f64> {
    impulsewave::obs_ratio(&state.inner, &setup_for(&state.inner, tau, omega, horizon)?)
        .map_err(lib_err)
}

/// Ratio sweep across truncations N = 1..=n_max for one coefficient family
/// ("constant" with scale `k`, "linear", or "pi_linear"). Returns
/// `(ratios, min_ratio, strictly_increasing)`.
#[pyfunction]
#[pyo3(signature = (family, n_max, tau, omega, k = 1.0))]
fn sweep_ratio(
    family: &str,
    n_max: usize,
    tau: f64,
    omega: (f64, f64),
    k: f64,
) -> PyResult<(Vec<f64>, f64, bool)> {
    let family = match family {
        "constant" => CoefficientFamily::Constant { k },
        "linear" => CoefficientFamily::Linear,
        "pi_linear" => CoefficientFamily::PiLinear,
        other => {
            return Err(PyValueError::new_err(format!(
                "family must be 'constant', 'linear' or 'pi_linear', got '{other}'"
            )))
        }
    };
    let setup = ObservationSetup::new(tau, parse_window(omega)?, tau + 0.5, 1).map_err(lib_err)?;
    let report = impulsewave::sweep_ratio(family, n_max, &setup).map_err(lib_err)?;
    Ok((report.ratios, report.min_ratio, report.strictly_increasing))
}

/// Outcome of the regularized steering solve.
#[pyclass(name = "ControlResult", frozen)]
struct PyControlResult {
    /// "reached" or "unreachable_at_truncation".
    #[pyo3(get)]
    verdict: String,
    /// Velocity-impulse coefficients of the computed control.
    #[pyo3(get)]
    control: Vec<f64>,
    /// Final residual (energy norm of the remaining target gap).
    #[pyo3(get)]
    residual: f64,
    /// Regularization strength at the final step.
    #[pyo3(get)]
    alpha: f64,
}

/// Steers `initial` toward `target` with one impulse at time `tau`,
/// judged at time `horizon` over the control window `omega`.
#[pyfunction]
#[pyo3(signature = (initial, target, tau, horizon, omega, epsilon = 1e-6))]
fn control(
    initial: &PyModalState,
    target: &PyModalState,
    tau: f64,
    horizon: f64,
    omega: (f64, f64),
    epsilon: f64,
) -> PyResult<PyControlResult> {
    let problem = ControlProblem::new(
        tau,
        horizon,
        parse_window(omega)?,
        initial.inner.clone(),
        target.inner.clone(),
    )
    .map_err(lib_err)?;
    let outcome = approx_control(&problem, epsilon, StateNorm::Energy).map_err(lib_err)?;
    Ok(match outcome {
        ControlOutcome::Reached {
            control,
            residual,
            alpha,
            ..
        } => PyControlResult {
            verdict: "reached".to_string(),
            control,
            residual,
            alpha,
        },
        ControlOutcome::UnreachableAtTruncation {
            control,
            limiting_residual,
            alpha,
            ..
        } => PyControlResult {
            verdict: "unreachable_at_truncation".to_string(),
            control,
            residual: limiting_residual,
            alpha,
        },
    })
}

/// Gram matrix of sin(iπx) over the window, as a nested list.
#[pyfunction]
fn mass_matrix(omega: (f64, f64), n: usize) -> PyResult<Vec<Vec<f64>>> {
    let mass = MassMatrix::new(parse_window(omega)?, n);
    Ok((0..n)
        .map(|i| (0..n).map(|j| mass.entry(i, j)).collect())
        .collect())
}

/// Max deviation of sin(nπx) from its Chebyshev product representation on a
/// uniform grid over the window.
#[pyfunction]
#[pyo3(signature = (n, omega = (0.0, 1.0), grid_points = 1000))]
fn sine_identity_check(n: usize, omega: (f64, f64), grid_points: usize) -> PyResult<f64> {
    impulsewave::chebyshev::sine_identity_check(n, parse_window(omega)?, grid_points)
        .map_err(lib_err)
}

/// Coefficient-level lower bound for states with aₙ = bₙ:
/// returns `(lhs, rhs, holds)`.
#[pyfunction]
fn coefficient_level_bound_check(state: &PyModalState, tau: f64) -> PyResult<(f64, f64, bool)> {
    let check = impulsewave::coefficient_level_bound_check(&state.inner, tau).map_err(lib_err)?;
    Ok((check.lhs, check.rhs, check.holds))
}

#[pymodule]
fn impulsewave_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModalState>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_class::<PyControlResult>()?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(observed_energy, m)?)?;
    m.add_function(wrap_pyfunction!(obs_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(control, m)?)?;
    m.add_function(wrap_pyfunction!(mass_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(sine_identity_check, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_level_bound_check, m)?)?;
    Ok(())
}
