//! Observation of the velocity field on a subinterval at a single instant:
//! the observed energy ∫_ω|u_t(x,τ)|²dx, its full-domain coefficient closed
//! form, per-mode amplitude/phase decomposition, observed-to-weak-norm
//! ratios with coefficient-family sweeps, and the duality operator Λ that
//! realizes the observed energy as a pairing against a backward impulsive
//! solve.
//!
//! One-instant observation has no uniform lower bound over all states — any
//! state whose velocity vanishes at the observation time is invisible — but
//! on the equal-coefficient families aₙ = bₙ the observed-to-weak-norm ratio
//! stays above ≈ 0.227 for ω = (0, 1/2) at τ = 2, which the sweep functions
//! quantify truncation by truncation.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::modal::{phase_sin_cos, MassMatrix, ModalState, SubInterval, WeakNormConvention};
use crate::solver::ImpulseEvent;
use crate::{Error, Result};

/// Where and when the velocity field is observed, plus the duality horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservationSetup {
    tau: f64,
    omega: SubInterval,
    horizon: f64,
    n_modes: usize,
}

impl ObservationSetup {
    /// `tau` is the observation instant (0 < τ < `horizon`), `omega` the
    /// observed subinterval, `horizon` the duality horizon T, and `n_modes`
    /// the truncation dimension.
    pub fn new(tau: f64, omega: SubInterval, horizon: f64, n_modes: usize) -> Result<Self> {
        if !tau.is_finite() || tau <= 0.0 {
            return Err(Error::NonPositive {
                what: "tau",
                value: tau,
            });
        }
        if !horizon.is_finite() || horizon <= tau {
            return Err(Error::HorizonBeforeTau { tau, horizon });
        }
        if n_modes == 0 {
            return Err(Error::EmptyState);
        }
        Ok(Self {
            tau,
            omega,
            horizon,
            n_modes,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn omega(&self) -> SubInterval {
        self.omega
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }
}

/// Energy of the velocity field restricted to ω at time τ:
/// ∫_ω|u_t(x,τ)|²dx = vᵀ E_ω v for the velocity coefficients v of the state
/// propagated to τ. Exact in the truncation; clamped at zero against
/// rounding of the positive-semidefinite form.
pub fn observed_energy(state0: &ModalState, setup: &ObservationSetup) -> Result<f64> {
    if state0.n_modes() != setup.n_modes {
        return Err(Error::DimensionMismatch {
            what: "observed state",
            expected: setup.n_modes,
            actual: state0.n_modes(),
        });
    }
    let at_tau = state0.propagate(setup.tau)?;
    let mass = MassMatrix::new(setup.omega, setup.n_modes);
    Ok(mass.quadratic_form(at_tau.velocity_coeffs())?.max(0.0))
}

/// Full-domain observed energy in closed form from the initial coefficients:
/// (1/2)Σ(−nπaₙ sin(nπτ) + bₙ cos(nπτ))².
///
/// Deliberately evaluates raw trigonometry on nπτ instead of the solver's
/// reduced-phase path, so agreement with [`observed_energy`] on ω = (0,1)
/// cross-checks the propagation and mass-matrix pipeline through genuinely
/// different arithmetic.
pub fn modal_observed_energy_full(state0: &ModalState, tau: f64) -> Result<f64> {
    if !tau.is_finite() {
        return Err(Error::NonFinite {
            what: "tau",
            value: tau,
        });
    }
    let mut sum = 0.0;
    for (k, (&a, &b)) in state0
        .position_coeffs()
        .iter()
        .zip(state0.velocity_coeffs())
        .enumerate()
    {
        let w = (k + 1) as f64 * PI;
        let (s, c) = (w * tau).sin_cos();
        let v = -a * w * s + b * c;
        sum += v * v;
    }
    Ok(0.5 * sum)
}

/// One mode's sinusoid data: the velocity contribution of mode n is
/// amplitude·sin(yₙ − nπt), so the observation at τ sees the mode through
/// sin²(nπτ + yₙ) up to the sign conventions below.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModePhase {
    /// √((nπaₙ)² + bₙ²).
    pub amplitude: f64,
    /// sin(yₙ) = bₙ / amplitude.
    pub sin_y: f64,
    /// cos(yₙ) = nπaₙ / amplitude.
    pub cos_y: f64,
}

impl ModePhase {
    /// The phase angle yₙ in (−π, π].
    pub fn angle(&self) -> f64 {
        self.sin_y.atan2(self.cos_y)
    }
}

/// Per-mode amplitude and phase of a state; modes with zero amplitude carry
/// no phase and map to `None`.
pub fn phase_decomposition(state0: &ModalState) -> Vec<Option<ModePhase>> {
    state0
        .position_coeffs()
        .iter()
        .zip(state0.velocity_coeffs())
        .enumerate()
        .map(|(k, (&a, &b))| {
            let w = (k + 1) as f64 * PI;
            let amplitude = f64::hypot(w * a, b);
            if amplitude == 0.0 {
                None
            } else {
                Some(ModePhase {
                    amplitude,
                    sin_y: b / amplitude,
                    cos_y: w * a / amplitude,
                })
            }
        })
        .collect()
}

/// Observed energy divided by the coefficient-convention weak norm of the
/// initial state. Scale-invariant; the denominator convention is fixed so
/// that N=1, a=b=(1), ω=(0,1/2), τ=2 lands on (1/4)/(1 + 1/π²) ≈ 0.22700.
pub fn obs_ratio(state0: &ModalState, setup: &ObservationSetup) -> Result<f64> {
    let denom = state0.weak_norm_sq(WeakNormConvention::Coefficient);
    if denom == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(observed_energy(state0, setup)? / denom)
}

/// Outcome of the coefficient-level lower bound for equal-coefficient
/// families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    /// Σ((nπaₙ)² + bₙ²)·sin²(nπτ + yₙ).
    pub lhs: f64,
    /// Half the coefficient-convention weak norm.
    pub rhs: f64,
    /// lhs ≥ rhs.
    pub holds: bool,
}

/// Checks the coefficient-level bound
/// Σ((nπaₙ)² + bₙ²)·sin²(nπτ + yₙ) ≥ (1/2)·Σ(aₙ² + bₙ²/(nπ)²) for states in
/// the aₙ = bₙ family (enforced to relative 1e-12 per mode).
///
/// Each left-hand term is evaluated through the angle addition
/// amplitude·sin(nπτ + yₙ) = sin(nπτ)·(nπaₙ) + cos(nπτ)·bₙ, which avoids the
/// amplitude division and makes the τ = 2 reduction of the term to bₙ² exact.
pub fn coefficient_level_bound_check(state0: &ModalState, tau: f64) -> Result<BoundCheck> {
    if !tau.is_finite() {
        return Err(Error::NonFinite {
            what: "tau",
            value: tau,
        });
    }
    for (k, (&a, &b)) in state0
        .position_coeffs()
        .iter()
        .zip(state0.velocity_coeffs())
        .enumerate()
    {
        if (a - b).abs() > 1e-12 * a.abs().max(b.abs()) {
            return Err(Error::FamilyMismatch { mode: k + 1, a, b });
        }
    }
    let r = tau % 2.0;
    let mut lhs = 0.0;
    for (k, (&a, &b)) in state0
        .position_coeffs()
        .iter()
        .zip(state0.velocity_coeffs())
        .enumerate()
    {
        let w = (k + 1) as f64 * PI;
        let (s, c) = phase_sin_cos(k + 1, r);
        let shifted = s * (w * a) + c * b;
        lhs += shifted * shifted;
    }
    let rhs = 0.5 * state0.weak_norm_sq(WeakNormConvention::Coefficient);
    Ok(BoundCheck {
        lhs,
        rhs,
        holds: lhs >= rhs,
    })
}

/// Equal-coefficient families aₙ = bₙ used by the ratio sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CoefficientFamily {
    /// aₙ = bₙ = k.
    Constant { k: f64 },
    /// aₙ = bₙ = n.
    Linear,
    /// aₙ = bₙ = nπ.
    PiLinear,
}

impl CoefficientFamily {
    /// Stable lowercase tag used in reports and CSV output.
    pub fn tag(&self) -> &'static str {
        match self {
            CoefficientFamily::Constant { .. } => "constant",
            CoefficientFamily::Linear => "linear",
            CoefficientFamily::PiLinear => "pi_linear",
        }
    }

    /// The family coefficient of the 1-based mode `n`.
    pub fn coefficient(&self, n: usize) -> f64 {
        match self {
            CoefficientFamily::Constant { k } => *k,
            CoefficientFamily::Linear => n as f64,
            CoefficientFamily::PiLinear => n as f64 * PI,
        }
    }

    /// The truncated family state with aₙ = bₙ up to `n_modes` modes.
    pub fn state(&self, n_modes: usize) -> Result<ModalState> {
        let coeffs: Vec<f64> = (1..=n_modes).map(|n| self.coefficient(n)).collect();
        ModalState::new(coeffs.clone(), coeffs)
    }

    /// Collapses the scale parameter: the observed-to-weak-norm ratio is
    /// invariant under scaling every coefficient by the same nonzero factor,
    /// so sweeps evaluate this representative and report bitwise-identical
    /// ratio columns for every nonzero `k`.
    fn unit_scale(self) -> Self {
        match self {
            CoefficientFamily::Constant { k } if k != 0.0 => CoefficientFamily::Constant { k: 1.0 },
            other => other,
        }
    }
}

/// Ratio sweep across truncation sizes N = 1..=N_max.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservabilityReport {
    /// Family tag: "constant" | "linear" | "pi_linear".
    pub family: String,
    /// obs_ratio of the N-mode family state, indexed by N − 1.
    pub ratios: Vec<f64>,
    /// Minimum of `ratios`.
    pub min_ratio: f64,
    /// Whether consecutive ratios strictly increase.
    pub strictly_increasing: bool,
}

/// Computes obs_ratio for the truncated family state at every N ≤ `n_max`,
/// using the setup's τ and ω (its `n_modes` field does not constrain the
/// sweep), and reports the minimum and strict monotonicity of the sequence.
pub fn sweep_ratio(
    family: CoefficientFamily,
    n_max: usize,
    setup: &ObservationSetup,
) -> Result<ObservabilityReport> {
    if n_max == 0 {
        return Err(Error::InvalidParameter {
            name: "n_max",
            message: "the sweep needs at least one truncation size".to_string(),
        });
    }
    let mut ratios = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let state = family.unit_scale().state(n)?;
        let per_n = ObservationSetup::new(setup.tau, setup.omega, setup.horizon, n)?;
        ratios.push(obs_ratio(&state, &per_n)?);
    }
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let strictly_increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    Ok(ObservabilityReport {
        family: family.tag().to_string(),
        ratios,
        min_ratio,
        strictly_increasing,
    })
}

/// Initial-time data of the backward duality solve, as sine coefficients of
/// the pair (Ψ'(0), −Ψ(0)).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaPair {
    /// Velocity coefficients Ψ'(0).
    pub psi_prime_at_zero: Vec<f64>,
    /// Negated position coefficients −Ψ(0).
    pub minus_psi_at_zero: Vec<f64>,
}

impl LambdaPair {
    pub fn n_modes(&self) -> usize {
        self.psi_prime_at_zero.len()
    }

    /// The duality pairing ∫ u⁰·Ψ'(0) − Ψ(0)·u¹ dx
    /// = (1/2)·Σ(aₙ·Ψ'(0)ₙ + bₙ·(−Ψ(0))ₙ) against a state (u⁰, u¹).
    pub fn pairing(&self, state0: &ModalState) -> Result<f64> {
        if state0.n_modes() != self.n_modes() {
            return Err(Error::DimensionMismatch {
                what: "pairing state",
                expected: self.n_modes(),
                actual: state0.n_modes(),
            });
        }
        let mut sum = 0.0;
        for k in 0..state0.n_modes() {
            sum += state0.position_coeffs()[k] * self.psi_prime_at_zero[k]
                + state0.velocity_coeffs()[k] * self.minus_psi_at_zero[k];
        }
        Ok(0.5 * sum)
    }
}

/// Runs the backward dual solve of the observation functional. The forward
/// state is propagated to τ; its masked velocity trace v becomes the
/// impulsive datum −T·(2E_ω v), carried by the backward solution as a
/// position component at τ⁻ (the dual system is at rest on (τ, T]); the
/// backward flow transports it to time 0. Returns (Ψ'(0), −Ψ(0)).
///
/// The construction is pinned by the duality identity
/// ⟨Λ(state0), state0⟩ = T·observed_energy(state0, setup), which it
/// satisfies to machine rounding: among masked-jump backward data, a
/// position datum proportional to E_ω v is the one whose time-0 pairing
/// reproduces T·vᵀE_ωv.
pub fn lambda_operator(state0: &ModalState, setup: &ObservationSetup) -> Result<LambdaPair> {
    if state0.n_modes() != setup.n_modes {
        return Err(Error::DimensionMismatch {
            what: "observed state",
            expected: setup.n_modes,
            actual: state0.n_modes(),
        });
    }
    let n = setup.n_modes;
    let at_tau = state0.propagate(setup.tau)?;
    // The masked jump 2·E_ω·v, realized by the same machinery the forward
    // solver applies to velocity impulses.
    let event = ImpulseEvent::new(setup.tau, at_tau.velocity_coeffs().to_vec(), setup.omega)?;
    let jump = event.velocity_jump(n)?;
    let position_datum: Vec<f64> = jump.iter().map(|j| -setup.horizon * j).collect();
    let at_zero = ModalState::new(position_datum, vec![0.0; n])?.propagate(-setup.tau)?;
    Ok(LambdaPair {
        psi_prime_at_zero: at_zero.velocity_coeffs().to_vec(),
        minus_psi_at_zero: at_zero.position_coeffs().iter().map(|p| -p).collect(),
    })
}

/// The squared observation semi-norm of a state: the duality pairing with
/// its own Λ image. Equals T·observed_energy up to rounding, and vanishes
/// exactly on states whose velocity is zero on ω at τ.
pub fn observation_seminorm_sq(state0: &ModalState, setup: &ObservationSetup) -> Result<f64> {
    lambda_operator(state0, setup)?.pairing(state0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn setup(tau: f64, omega: SubInterval, horizon: f64, n: usize) -> ObservationSetup {
        ObservationSetup::new(tau, omega, horizon, n).unwrap()
    }

    fn state(pos: &[f64], vel: &[f64]) -> ModalState {
        ModalState::new(pos.to_vec(), vel.to_vec()).unwrap()
    }

    fn half() -> SubInterval {
        SubInterval::new(0.0, 0.5).unwrap()
    }

    #[test]
    fn observed_energy_anchors() {
        let s = setup(2.0, SubInterval::full(), 2.5, 3);
        assert_eq!(
            observed_energy(&ModalState::zero(3).unwrap(), &s).unwrap(),
            0.0
        );

        // Whole period, full domain: the velocity returns to its initial
        // coefficients bitwise, so the result is (1/2)Σbₙ² = N/2 exactly.
        let st = state(&[1.0; 4], &[1.0; 4]);
        let s = setup(2.0, SubInterval::full(), 2.5, 4);
        assert_eq!(observed_energy(&st, &s).unwrap(), 2.0);

        // Single mode on the half interval at the whole period: E_ω(1,1) is
        // exactly 1/4.
        let st = state(&[1.0], &[1.0]);
        let s = setup(2.0, half(), 2.5, 1);
        assert_eq!(observed_energy(&st, &s).unwrap(), 0.25);
    }

    #[test]
    fn whole_period_reduces_to_initial_velocity_exactly() {
        let st = state(&[0.7, -0.3, 0.2], &[0.1, 0.9, -0.6]);
        for omega in [
            SubInterval::full(),
            half(),
            SubInterval::new(0.3, 0.4).unwrap(),
        ] {
            let s = setup(2.0, omega, 2.5, 3);
            let direct = MassMatrix::new(omega, 3)
                .quadratic_form(st.velocity_coeffs())
                .unwrap();
            assert_eq!(observed_energy(&st, &s).unwrap(), direct.max(0.0));
        }
    }

    #[test]
    fn modal_closed_form_anchors() {
        let st = state(&[0.3, -0.7], &[1.0, 0.25]);
        let e0 = modal_observed_energy_full(&st, 0.0).unwrap();
        assert_eq!(e0, 0.53125); // (1/2)(1² + 0.25²), exact at τ = 0

        let e2 = modal_observed_energy_full(&st, 2.0).unwrap();
        assert_abs_diff_eq!(e2, e0, epsilon = 1e-12);

        let st = state(&[1.0], &[0.0]);
        assert_relative_eq!(
            modal_observed_energy_full(&st, 0.5).unwrap(),
            PI * PI / 2.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn modal_closed_form_agrees_with_masked_pipeline_on_full_domain() {
        let st = state(&[0.2, -0.4, 0.1], &[0.0, 0.7, -0.3]);
        for tau in [0.37, 1.25, 1.9] {
            let s = setup(tau, SubInterval::full(), 2.5, 3);
            assert_relative_eq!(
                observed_energy(&st, &s).unwrap(),
                modal_observed_energy_full(&st, tau).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn phase_decomposition_anchors() {
        // Pure velocity: y = π/2.
        let phases = phase_decomposition(&state(&[0.0], &[1.0]));
        let p = phases[0].unwrap();
        assert_eq!(p.amplitude, 1.0);
        assert_eq!(p.sin_y, 1.0);
        assert_eq!(p.cos_y, 0.0);
        assert_relative_eq!(p.angle(), std::f64::consts::FRAC_PI_2, max_relative = 1e-15);

        // Equal coefficients, first mode: sin y = 1/√(π²+1) ≈ 0.30331.
        let phases = phase_decomposition(&state(&[1.0], &[1.0]));
        let p = phases[0].unwrap();
        assert_relative_eq!(p.sin_y, 1.0 / (PI * PI + 1.0).sqrt(), max_relative = 1e-14);
        assert_abs_diff_eq!(p.sin_y, 0.30331, epsilon = 1e-5);

        // Pure position: sin y = 0.
        for p in phase_decomposition(&state(&[1.0, 0.5], &[0.0, 0.0])) {
            assert_eq!(p.unwrap().sin_y, 0.0);
        }

        // Zero-amplitude modes carry no phase.
        let phases = phase_decomposition(&state(&[0.0, 1.0], &[0.0, 0.0]));
        assert!(phases[0].is_none());
        assert!(phases[1].is_some());

        // Unit circle to rounding.
        for p in phase_decomposition(&state(&[0.3, -0.2], &[1.4, 0.9]))
            .into_iter()
            .flatten()
        {
            assert_abs_diff_eq!(p.sin_y * p.sin_y + p.cos_y * p.cos_y, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn equal_coefficient_family_beats_generic_phase_floor() {
        // For aₙ = bₙ, |sin yₙ| = 1/√((nπ)²+1), strictly above the generic
        // envelope 1/(nπ√2) for every mode.
        let st = CoefficientFamily::Linear.state(6).unwrap();
        for (k, p) in phase_decomposition(&st).iter().enumerate() {
            let p = p.unwrap();
            let w = (k + 1) as f64 * PI;
            assert!(p.sin_y.abs() > 1.0 / (w * std::f64::consts::SQRT_2));
            assert_relative_eq!(
                p.sin_y.abs(),
                1.0 / (w * w + 1.0).sqrt(),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn ratio_anchors_and_scale_invariance() {
        let st = state(&[1.0], &[1.0]);
        let r = obs_ratio(&st, &setup(2.0, half(), 2.5, 1)).unwrap();
        assert_abs_diff_eq!(r, 0.2270, epsilon = 1e-3);
        assert_relative_eq!(r, 0.25 / (1.0 + 1.0 / (PI * PI)), max_relative = 1e-14);

        let r_full = obs_ratio(&st, &setup(2.0, SubInterval::full(), 2.5, 1)).unwrap();
        assert_relative_eq!(r_full, 0.5 / (1.0 + 1.0 / (PI * PI)), max_relative = 1e-14);
        assert_abs_diff_eq!(r_full, 0.4540, epsilon = 1e-3);

        for scale in [2.0, -3.5, 1e-6] {
            let scaled = state(&[scale], &[scale]);
            assert_relative_eq!(
                obs_ratio(&scaled, &setup(2.0, half(), 2.5, 1)).unwrap(),
                r,
                max_relative = 1e-12
            );
        }

        assert!(matches!(
            obs_ratio(&ModalState::zero(2).unwrap(), &setup(2.0, half(), 2.5, 2)),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn coefficient_bound_anchors() {
        let check = coefficient_level_bound_check(&state(&[1.0], &[1.0]), 2.0).unwrap();
        assert_eq!(check.lhs, 1.0); // per-mode term reduces to bₙ² at τ = 2
        assert_relative_eq!(
            check.rhs,
            0.5 * (1.0 + 1.0 / (PI * PI)),
            max_relative = 1e-14
        );
        assert_abs_diff_eq!(check.rhs, 0.5507, epsilon = 1e-4);
        assert!(check.holds);

        let st = CoefficientFamily::Constant { k: 1.0 }.state(10).unwrap();
        let check = coefficient_level_bound_check(&st, 2.0).unwrap();
        assert_eq!(check.lhs, 10.0);
        assert!(check.holds);
        assert!(check.lhs / check.rhs >= 1.8);

        let check = coefficient_level_bound_check(&ModalState::zero(3).unwrap(), 2.0).unwrap();
        assert_eq!(check.lhs, 0.0);
        assert_eq!(check.rhs, 0.0);
        assert!(check.holds);

        assert!(matches!(
            coefficient_level_bound_check(&state(&[1.0, 0.5], &[1.0, 0.4]), 2.0),
            Err(Error::FamilyMismatch { mode: 2, .. })
        ));
    }

    #[test]
    fn sweep_family_anchors() {
        let s = setup(2.0, half(), 2.5, 1);
        let report = sweep_ratio(CoefficientFamily::Constant { k: 1.0 }, 6, &s).unwrap();
        assert_eq!(report.family, "constant");
        assert_eq!(report.ratios.len(), 6);
        assert_abs_diff_eq!(report.ratios[0], 0.2270, epsilon = 1e-3);
        assert!(report.min_ratio >= 0.227 - 1e-3);
        assert_eq!(
            report.min_ratio,
            report.ratios.iter().copied().fold(f64::INFINITY, f64::min)
        );

        // Homogeneity: the constant family's ratios do not depend on k.
        let report7 = sweep_ratio(CoefficientFamily::Constant { k: 7.0 }, 6, &s).unwrap();
        for (r1, r7) in report.ratios.iter().zip(&report7.ratios) {
            assert_relative_eq!(*r1, *r7, max_relative = 1e-12);
        }

        // A single mode is scale-free, so every family starts at the same
        // N = 1 ratio.
        let lin = sweep_ratio(CoefficientFamily::Linear, 1, &s).unwrap();
        assert_relative_eq!(lin.ratios[0], report.ratios[0], max_relative = 1e-14);
        assert!(lin.strictly_increasing); // vacuous for a single entry

        // The constant family's sequence is not monotone: the cross terms of
        // the half-interval matrix pull the N = 4 ratio below N = 3
        // (1ᵀE_ω1 gains a negative (1,4) entry), and the report records it.
        assert_abs_diff_eq!(report.ratios[2], 0.455419, epsilon = 1e-5);
        assert_abs_diff_eq!(report.ratios[3], 0.451971, epsilon = 1e-5);
        assert!(report.ratios[2] > report.ratios[3]);
        assert!(!report.strictly_increasing);

        assert!(sweep_ratio(CoefficientFamily::Linear, 0, &s).is_err());
    }

    #[test]
    fn lambda_zero_state_maps_to_zero() {
        let s = setup(2.0, half(), 2.5, 3);
        let pair = lambda_operator(&ModalState::zero(3).unwrap(), &s).unwrap();
        assert!(pair.psi_prime_at_zero.iter().all(|&x| x == 0.0));
        assert!(pair.minus_psi_at_zero.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn duality_identity_and_seminorm() {
        let st = state(&[0.4, -0.2, 0.1], &[0.9, 0.0, -0.5]);
        for (tau, horizon) in [(2.0, 2.5), (0.7, 1.3), (1.9, 4.0)] {
            for omega in [
                SubInterval::full(),
                half(),
                SubInterval::new(0.3, 0.4).unwrap(),
            ] {
                let s = setup(tau, omega, horizon, 3);
                let pair = lambda_operator(&st, &s).unwrap();
                let lhs = pair.pairing(&st).unwrap();
                let rhs = s.horizon() * observed_energy(&st, &s).unwrap();
                assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
                assert_relative_eq!(
                    observation_seminorm_sq(&st, &s).unwrap(),
                    rhs,
                    max_relative = 1e-10
                );
                assert!(lhs >= 0.0);
            }
        }
    }

    #[test]
    fn position_only_states_are_invisible_at_whole_periods() {
        // The uniform-bound counterexample: zero velocity coefficients give
        // zero observed energy at τ = 2 while the weak norm stays positive,
        // so no one-instant constant can hold for unrestricted states.
        let st = state(&[1.0, -0.5], &[0.0, 0.0]);
        let s = setup(2.0, half(), 2.5, 2);
        assert_eq!(observed_energy(&st, &s).unwrap(), 0.0);
        assert!(st.weak_norm_sq(WeakNormConvention::Coefficient) > 1.0);
        assert_eq!(obs_ratio(&st, &s).unwrap(), 0.0);
        assert_eq!(observation_seminorm_sq(&st, &s).unwrap(), 0.0);
    }

    #[test]
    fn setup_validation() {
        assert!(ObservationSetup::new(0.0, SubInterval::full(), 1.0, 2).is_err());
        assert!(ObservationSetup::new(-1.0, SubInterval::full(), 1.0, 2).is_err());
        assert!(ObservationSetup::new(2.0, SubInterval::full(), 2.0, 2).is_err());
        assert!(ObservationSetup::new(2.0, SubInterval::full(), 2.5, 0).is_err());
        assert!(ObservationSetup::new(2.0, SubInterval::full(), 2.5, 2).is_ok());

        let s = setup(2.0, SubInterval::full(), 2.5, 2);
        assert!(matches!(
            observed_energy(&ModalState::zero(3).unwrap(), &s),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            lambda_operator(&ModalState::zero(3).unwrap(), &s),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
