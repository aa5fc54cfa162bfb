//! Single-impulse controllability: the reachability map of one masked
//! velocity impulse at time τ, its Gramian, Tikhonov-regularized control
//! synthesis with honest reachability verdicts, and the unique-continuation
//! certificate for sine expansions observed on a subinterval.
//!
//! The state increment produced by an impulse with profile c is linear in c:
//! stacking position and velocity coefficients into a 2N-vector, the map is a
//! 2N×N matrix G whose columns are single-impulse solves. Controls are
//! synthesized as c = Gᵀ(αI + GGᵀ)⁻¹ z for the steering defect z; the defect
//! left over is exactly α(αI + GGᵀ)⁻¹ z, which tends to the distance from z
//! to range(G) as α → 0. Since one impulse can only reach an N-dimensional
//! subspace of the 2N-dimensional truncated state space, targets outside it
//! are reported as unreachable at this truncation rather than iterated on
//! forever.

use nalgebra::{Cholesky, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::modal::{MassMatrix, ModalState, SubInterval};
use crate::solver::{solve, ImpulseEvent, ImpulseSchedule};
use crate::{Error, Result};

/// Condition-estimate ceiling for the regularized solve.
const CONDITION_LIMIT: f64 = 1e14;

/// Certification threshold on the smallest Gram eigenvalue.
const UC_EIGENVALUE_FLOOR: f64 = 1e-12;

/// Steering task: drive `initial` to `target` at time `horizon` with a single
/// velocity impulse at `tau` masked to `omega`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlProblem {
    n_modes: usize,
    tau: f64,
    horizon: f64,
    omega: SubInterval,
    initial: ModalState,
    target: ModalState,
}

impl ControlProblem {
    pub fn new(
        tau: f64,
        horizon: f64,
        omega: SubInterval,
        initial: ModalState,
        target: ModalState,
    ) -> Result<Self> {
        if !tau.is_finite() || tau <= 0.0 {
            return Err(Error::NonPositive {
                what: "tau",
                value: tau,
            });
        }
        if !horizon.is_finite() || horizon <= tau {
            return Err(Error::HorizonBeforeTau { tau, horizon });
        }
        if initial.n_modes() != target.n_modes() {
            return Err(Error::DimensionMismatch {
                what: "target coefficients",
                expected: initial.n_modes(),
                actual: target.n_modes(),
            });
        }
        Ok(Self {
            n_modes: initial.n_modes(),
            tau,
            horizon,
            omega,
            initial,
            target,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn omega(&self) -> SubInterval {
        self.omega
    }

    pub fn initial(&self) -> &ModalState {
        &self.initial
    }

    pub fn target(&self) -> &ModalState {
        &self.target
    }

    /// The steering defect z = target − free evolution of the initial state,
    /// as a stacked 2N vector (positions, then velocities).
    pub fn target_gap(&self) -> Result<Vec<f64>> {
        let free = self.initial.propagate(self.horizon)?;
        let mut z = Vec::with_capacity(2 * self.n_modes);
        for i in 0..self.n_modes {
            z.push(self.target.position_coeffs()[i] - free.position_coeffs()[i]);
        }
        for i in 0..self.n_modes {
            z.push(self.target.velocity_coeffs()[i] - free.velocity_coeffs()[i]);
        }
        Ok(z)
    }
}

/// Stacks a state into a 2N vector (positions first, then velocities).
pub fn stack_state(state: &ModalState) -> Vec<f64> {
    let mut v = Vec::with_capacity(2 * state.n_modes());
    v.extend_from_slice(state.position_coeffs());
    v.extend_from_slice(state.velocity_coeffs());
    v
}

/// Inverse of [`stack_state`].
pub fn unstack_state(stacked: &[f64]) -> Result<ModalState> {
    if !stacked.len().is_multiple_of(2) || stacked.is_empty() {
        return Err(Error::DimensionMismatch {
            what: "stacked state",
            expected: stacked.len() + 1,
            actual: stacked.len(),
        });
    }
    let n = stacked.len() / 2;
    ModalState::new(stacked[..n].to_vec(), stacked[n..].to_vec())
}

/// Norm used to report steering residuals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateNorm {
    /// Square root of the state-space energy (H¹₀ × L² pairing); the default.
    Energy,
    /// Square root of the coefficient-convention weak norm (L² × H⁻¹ style).
    WeakCoefficient,
}

impl StateNorm {
    /// Norm of a stacked 2N vector interpreted as a modal state.
    pub fn of_stacked(&self, z: &[f64]) -> f64 {
        let n = z.len() / 2;
        let (a, b) = z.split_at(n);
        let mut sum = 0.0;
        for k in 0..n {
            let w = (k + 1) as f64 * std::f64::consts::PI;
            sum += match self {
                StateNorm::Energy => 0.5 * ((w * a[k]).powi(2) + b[k].powi(2)),
                StateNorm::WeakCoefficient => a[k].powi(2) + (b[k] / w).powi(2),
            };
        }
        sum.sqrt()
    }
}

/// The single-impulse reachability map G (2N×N) and its Gramian GGᵀ.
#[derive(Debug, Clone, PartialEq)]
pub struct GramianOperator {
    factor: DMatrix<f64>,
    product: DMatrix<f64>,
}

impl GramianOperator {
    /// The 2N×N factor: column j is the state at the horizon reached from
    /// zero by a unit impulse on mode j.
    pub fn factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    /// The 2N×2N symmetric positive-semidefinite Gramian GGᵀ.
    pub fn product(&self) -> &DMatrix<f64> {
        &self.product
    }

    pub fn n_modes(&self) -> usize {
        self.factor.ncols()
    }

    fn singular_values_desc(&self) -> Vec<f64> {
        let svd = self.factor.clone().svd(false, false);
        let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
        sv
    }

    /// Cutoff below which singular values count as numerically zero
    /// (σ_max · max(2N, N) · ε, the usual numerical-rank convention).
    pub fn rank_tolerance(&self) -> f64 {
        let sv = self.singular_values_desc();
        let sigma_max = sv.first().copied().unwrap_or(0.0);
        sigma_max * (2 * self.n_modes()) as f64 * f64::EPSILON
    }

    /// Numerical rank of G.
    pub fn rank(&self) -> usize {
        let tol = self.rank_tolerance();
        self.singular_values_desc()
            .iter()
            .filter(|&&s| s > tol)
            .count()
    }

    /// Smallest eigenvalue of GGᵀ restricted to its numerically resolved
    /// range: the square of the smallest singular value of G at or above the
    /// rank cutoff. Positive by construction whenever G is nonzero; for short
    /// masks and many modes the unrestricted smallest eigenvalue sits below
    /// f64 resolution, where a raw eigensolve would return sign noise.
    pub fn min_restricted_eigenvalue(&self) -> f64 {
        let tol = self.rank_tolerance();
        self.singular_values_desc()
            .iter()
            .copied()
            .filter(|&s| s > tol)
            .fold(f64::NAN, f64::min)
            .powi(2)
    }

    /// G·c as a stacked 2N vector.
    pub fn apply(&self, c: &[f64]) -> Result<Vec<f64>> {
        if c.len() != self.n_modes() {
            return Err(Error::DimensionMismatch {
                what: "control coefficients",
                expected: self.n_modes(),
                actual: c.len(),
            });
        }
        let v = &self.factor * DVector::from_column_slice(c);
        Ok(v.iter().copied().collect())
    }

    /// Largest eigenvalue of GGᵀ (used for the condition estimate).
    fn max_eigenvalue(&self) -> f64 {
        self.singular_values_desc()
            .first()
            .copied()
            .unwrap_or(0.0)
            .powi(2)
    }

    /// Solves the Tikhonov system for a stacked defect z:
    /// c = Gᵀ(αI + GGᵀ)⁻¹z. Returns (control, defect vector z − Gc); the
    /// defect vector equals α(αI + GGᵀ)⁻¹z up to rounding.
    pub fn regularized_solve(&self, z: &[f64], alpha: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::NonPositive {
                what: "alpha",
                value: alpha,
            });
        }
        let dim = self.factor.nrows();
        if z.len() != dim {
            return Err(Error::DimensionMismatch {
                what: "steering defect",
                expected: dim,
                actual: z.len(),
            });
        }
        let cond = (alpha + self.max_eigenvalue()) / alpha;
        if cond > CONDITION_LIMIT {
            return Err(Error::IllConditioned {
                cond,
                limit: CONDITION_LIMIT,
            });
        }
        let mut shifted = self.product.clone();
        for i in 0..dim {
            shifted[(i, i)] += alpha;
        }
        let chol = Cholesky::new(shifted).ok_or(Error::IllConditioned {
            cond,
            limit: CONDITION_LIMIT,
        })?;
        let zv = DVector::from_column_slice(z);
        let y = chol.solve(&zv);
        let control = self.factor.transpose() * &y;
        let defect = &zv - &self.factor * &control;
        Ok((
            control.iter().copied().collect(),
            defect.iter().copied().collect(),
        ))
    }
}

/// Flows a state of the time-reversed (adjoint) system forward by `t`, which
/// for this self-adjoint wave group is exactly the free flow run backward.
pub fn adjoint_solve(theta0: &ModalState, t: f64) -> Result<ModalState> {
    theta0.propagate(-t)
}

/// Assembles the reachability map column by column: column j is the state at
/// the horizon produced from the zero state by a unit impulse on mode j at
/// `tau`, masked to ω — each column is a genuine solver run, not a formula.
pub fn build_gramian(problem: &ControlProblem) -> Result<GramianOperator> {
    let n = problem.n_modes;
    let mut factor = DMatrix::zeros(2 * n, n);
    for j in 0..n {
        let mut profile = vec![0.0; n];
        profile[j] = 1.0;
        let schedule = ImpulseSchedule::new(
            problem.horizon,
            vec![ImpulseEvent::new(problem.tau, profile, problem.omega)?],
        )?;
        let trajectory = solve(&ModalState::zero(n)?, &schedule)?;
        let state = trajectory.state_at(problem.horizon)?;
        for i in 0..n {
            factor[(i, j)] = state.position_coeffs()[i];
            factor[(n + i, j)] = state.velocity_coeffs()[i];
        }
    }
    let product = &factor * factor.transpose();
    Ok(GramianOperator { factor, product })
}

/// A synthesized control with its residual in the requested state norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularizedControl {
    /// Impulse profile coefficients.
    pub control: Vec<f64>,
    /// Norm of the steering defect left after applying the control.
    pub residual: f64,
}

/// One-shot Tikhonov synthesis at a fixed regularization strength.
pub fn regularized_control(
    problem: &ControlProblem,
    alpha: f64,
    norm: StateNorm,
) -> Result<RegularizedControl> {
    let gramian = build_gramian(problem)?;
    let z = problem.target_gap()?;
    let (control, defect) = gramian.regularized_solve(&z, alpha)?;
    Ok(RegularizedControl {
        control,
        residual: norm.of_stacked(&defect),
    })
}

/// One step of the regularization sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaStep {
    pub alpha: f64,
    pub residual: f64,
}

/// Outcome of the α-sweep: either the target was matched within ε, or the
/// residual stagnated at the distance from the defect to range(G), in which
/// case the target is unreachable with a single impulse at this truncation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ControlOutcome {
    Reached {
        control: Vec<f64>,
        residual: f64,
        alpha: f64,
        trace: Vec<AlphaStep>,
    },
    UnreachableAtTruncation {
        control: Vec<f64>,
        limiting_residual: f64,
        alpha: f64,
        trace: Vec<AlphaStep>,
    },
}

impl ControlOutcome {
    pub fn trace(&self) -> &[AlphaStep] {
        match self {
            ControlOutcome::Reached { trace, .. } => trace,
            ControlOutcome::UnreachableAtTruncation { trace, .. } => trace,
        }
    }

    pub fn control(&self) -> &[f64] {
        match self {
            ControlOutcome::Reached { control, .. } => control,
            ControlOutcome::UnreachableAtTruncation { control, .. } => control,
        }
    }
}

/// Geometric α-sweep (1e-1, 1e-2, …) until the residual drops below `epsilon`
/// or stagnates (relative change ≤ 1e-3 on two consecutive steps, or the
/// solve leaves its trusted conditioning range). Failure to reach ε is a
/// verdict, not an error.
pub fn approx_control(
    problem: &ControlProblem,
    epsilon: f64,
    norm: StateNorm,
) -> Result<ControlOutcome> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::NonPositive {
            what: "epsilon",
            value: epsilon,
        });
    }
    let gramian = build_gramian(problem)?;
    let z = problem.target_gap()?;

    let mut trace: Vec<AlphaStep> = Vec::new();
    let mut last: Option<(Vec<f64>, f64, f64)> = None;
    let mut stagnant_steps = 0usize;
    for k in 0..CONDITION_LIMIT.log10() as usize + 2 {
        let alpha = 1e-1 * 10f64.powi(-(k as i32));
        let (control, defect) = match gramian.regularized_solve(&z, alpha) {
            Ok(pair) => pair,
            Err(Error::IllConditioned { .. }) if last.is_some() => break,
            Err(e) => return Err(e),
        };
        let residual = norm.of_stacked(&defect);
        trace.push(AlphaStep { alpha, residual });
        if residual < epsilon {
            return Ok(ControlOutcome::Reached {
                control,
                residual,
                alpha,
                trace,
            });
        }
        if let Some((_, prev_residual, _)) = &last {
            let change =
                (prev_residual - residual).abs() / prev_residual.abs().max(f64::MIN_POSITIVE);
            if change <= 1e-3 {
                stagnant_steps += 1;
            } else {
                stagnant_steps = 0;
            }
        }
        last = Some((control, residual, alpha));
        if stagnant_steps >= 2 {
            break;
        }
    }
    let (control, limiting_residual, alpha) = last.expect("sweep ran at least one step");
    Ok(ControlOutcome::UnreachableAtTruncation {
        control,
        limiting_residual,
        alpha,
        trace,
    })
}

/// Unique-continuation certificate for N sine modes observed on ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UcReport {
    /// Smallest eigenvalue of the Gram matrix of {sin(kπx)} on ω. Values
    /// below ~1e-15 are at the eigensolver's resolution floor and only their
    /// magnitude is meaningful.
    pub gram_min_eig: f64,
    /// L²(ω) norm of the observed combination built from the coefficients.
    pub function_norm_on_omega: f64,
    /// True when the Gram matrix is numerically nonsingular, i.e. a vanishing
    /// observation on ω forces all coefficients to vanish.
    pub certified: bool,
}

/// Checks the unique-continuation implication for the combination
/// Σ aₖ (kπ)² e^{ikπτ} sin(kπx) observed on ω.
///
/// The functions sin(πx)·U_{k−1}(cos(πx)) coincide with sin(kπx), so their
/// Gram matrix on ω is the restricted mass matrix, evaluated in closed form;
/// linear independence on ω (positive smallest eigenvalue) is exactly the
/// statement that the observed combination vanishes only for zero
/// coefficients. The function norm keeps the complex phases e^{ikπτ}: with
/// rₖ = −aₖ(kπ)²cos(kπτ) and sₖ = aₖ(kπ)²sin(kπτ), it is
/// √(rᵀEr + sᵀEs) for the mass matrix E on ω.
pub fn unique_continuation_check(coeffs: &[f64], tau: f64, omega: SubInterval) -> Result<UcReport> {
    if coeffs.is_empty() {
        return Err(Error::EmptyState);
    }
    if !tau.is_finite() {
        return Err(Error::NonFinite {
            what: "tau",
            value: tau,
        });
    }
    for &a in coeffs {
        if !a.is_finite() {
            return Err(Error::NonFinite {
                what: "coefficient",
                value: a,
            });
        }
    }
    let n = coeffs.len();
    let mass = MassMatrix::new(omega, n);
    let gram_min_eig = mass.min_eigenvalue();

    let mut re = Vec::with_capacity(n);
    let mut im = Vec::with_capacity(n);
    for (k, &a) in coeffs.iter().enumerate() {
        let w = (k + 1) as f64 * std::f64::consts::PI;
        let (s, c) = crate::modal::phase_sin_cos(k + 1, tau % 2.0);
        re.push(-a * w * w * c);
        im.push(-a * w * w * s);
    }
    let norm_sq = mass.quadratic_form(&re)? + mass.quadratic_form(&im)?;
    Ok(UcReport {
        gram_min_eig,
        function_norm_on_omega: norm_sq.max(0.0).sqrt(),
        certified: gram_min_eig > UC_EIGENVALUE_FLOOR,
    })
}
