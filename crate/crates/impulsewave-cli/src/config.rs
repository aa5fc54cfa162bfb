//! JSON config schemas for the five subcommands, with validation that turns
//! every schema or range problem into a machine-readable error record.

use crate::record::CliError;
use impulsewave::modal::{ModalState, SubInterval};
use impulsewave::{CoefficientFamily, ImpulseEvent, ImpulseSchedule, StateNorm};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Output format for the result document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

fn check_finite(name: &'static str, values: &[f64]) -> Result<(), CliError> {
    for &v in values {
        if !v.is_finite() {
            return Err(CliError::invalid(name, format!("non-finite value {v}")));
        }
    }
    Ok(())
}

fn parse_interval(name: &'static str, bounds: [f64; 2]) -> Result<SubInterval, CliError> {
    check_finite(name, &bounds)?;
    SubInterval::new(bounds[0], bounds[1]).map_err(|e| CliError::invalid(name, e.to_string()))
}

fn parse_state(
    pos_name: &'static str,
    pos: &[f64],
    vel_name: &'static str,
    vel: &[f64],
) -> Result<ModalState, CliError> {
    check_finite(pos_name, pos)?;
    check_finite(vel_name, vel)?;
    if pos.len() != vel.len() {
        return Err(CliError::invalid(
            vel_name,
            format!(
                "expected {} coefficients to match {pos_name}, got {}",
                pos.len(),
                vel.len()
            ),
        ));
    }
    ModalState::new(pos.to_vec(), vel.to_vec())
        .map_err(|e| CliError::invalid(pos_name, e.to_string()))
}

/// Reads and parses a JSON config file into `T`.
pub fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::new(
            "io",
            "config",
            format!("cannot read {}: {e}", path.display()),
        )
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::new("parse", "config", e.to_string()))
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpulseConfig {
    pub time: f64,
    pub profile: Vec<f64>,
    /// Mask subinterval as [lo, hi]; defaults to the whole domain.
    #[serde(default = "full_mask")]
    pub mask: [f64; 2],
}

fn full_mask() -> [f64; 2] {
    [0.0, 1.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[derive(Default)]
pub enum SideChoice {
    Left,
    Right,
    #[default]
    Both,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub initial_position: Vec<f64>,
    pub initial_velocity: Vec<f64>,
    pub horizon: f64,
    #[serde(default)]
    pub impulses: Vec<ImpulseConfig>,
    pub sample_times: Vec<f64>,
    #[serde(default)]
    pub sides: SideChoice,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
}

pub struct SimulatePlan {
    pub initial: ModalState,
    pub schedule: ImpulseSchedule,
    pub sample_times: Vec<f64>,
    pub sides: SideChoice,
}

impl SimulateConfig {
    pub fn plan(&self) -> Result<SimulatePlan, CliError> {
        let initial = parse_state(
            "initial_position",
            &self.initial_position,
            "initial_velocity",
            &self.initial_velocity,
        )?;
        if !self.horizon.is_finite() || self.horizon <= 0.0 {
            return Err(CliError::invalid(
                "horizon",
                format!("must be positive and finite, got {}", self.horizon),
            ));
        }
        if self.sample_times.is_empty() {
            return Err(CliError::invalid(
                "sample_times",
                "at least one sample time",
            ));
        }
        check_finite("sample_times", &self.sample_times)?;
        for &t in &self.sample_times {
            if !(0.0..=self.horizon).contains(&t) {
                return Err(CliError::invalid(
                    "sample_times",
                    format!("time {t} outside [0, {}]", self.horizon),
                ));
            }
        }
        let mut events = Vec::with_capacity(self.impulses.len());
        for (i, entry) in self.impulses.iter().enumerate() {
            let mask = parse_interval("impulses.mask", entry.mask)?;
            check_finite("impulses.profile", &entry.profile)?;
            if entry.profile.len() != initial.n_modes() {
                return Err(CliError::invalid(
                    "impulses.profile",
                    format!(
                        "impulse {i}: expected {} coefficients, got {}",
                        initial.n_modes(),
                        entry.profile.len()
                    ),
                ));
            }
            events.push(
                ImpulseEvent::new(entry.time, entry.profile.clone(), mask)
                    .map_err(|e| CliError::invalid("impulses.time", e.to_string()))?,
            );
        }
        let schedule = ImpulseSchedule::new(self.horizon, events)
            .map_err(|e| CliError::invalid("impulses", e.to_string()))?;
        Ok(SimulatePlan {
            initial,
            schedule,
            sample_times: self.sample_times.clone(),
            sides: self.sides,
        })
    }
}

// ---------------------------------------------------------------------------
// observe
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserveConfig {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub tau: f64,
    pub omega: [f64; 2],
    /// Optional duality horizon T; defaults to tau + 1.
    #[serde(default)]
    pub horizon: Option<f64>,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
}

pub struct ObservePlan {
    pub state: ModalState,
    pub setup: impulsewave::ObservationSetup,
}

impl ObserveConfig {
    pub fn plan(&self) -> Result<ObservePlan, CliError> {
        let state = parse_state("position", &self.position, "velocity", &self.velocity)?;
        let omega = parse_interval("omega", self.omega)?;
        if !self.tau.is_finite() {
            return Err(CliError::invalid("tau", "must be finite"));
        }
        let horizon = self.horizon.unwrap_or(self.tau + 1.0);
        let setup = impulsewave::ObservationSetup::new(self.tau, omega, horizon, state.n_modes())
            .map_err(|e| CliError::invalid("tau", e.to_string()))?;
        Ok(ObservePlan { state, setup })
    }
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

// No `deny_unknown_fields` here: serde cannot combine it with `flatten`,
// which routes the `family`/`k` keys into the coefficient-family enum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(flatten)]
    pub family: CoefficientFamily,
    pub n_max: usize,
    pub tau: f64,
    pub omega: [f64; 2],
    #[serde(default)]
    pub horizon: Option<f64>,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
}

pub struct SweepPlan {
    pub family: CoefficientFamily,
    pub n_max: usize,
    pub setup: impulsewave::ObservationSetup,
}

impl SweepConfig {
    pub fn plan(&self) -> Result<SweepPlan, CliError> {
        if let CoefficientFamily::Constant { k } = self.family {
            if !k.is_finite() {
                return Err(CliError::invalid("k", "must be finite"));
            }
        }
        let omega = parse_interval("omega", self.omega)?;
        if self.n_max == 0 {
            return Err(CliError::invalid("n_max", "must be at least 1"));
        }
        let horizon = self.horizon.unwrap_or(self.tau + 0.5);
        let setup = impulsewave::ObservationSetup::new(self.tau, omega, horizon, 1)
            .map_err(|e| CliError::invalid("tau", e.to_string()))?;
        Ok(SweepPlan {
            family: self.family,
            n_max: self.n_max,
            setup,
        })
    }
}

// ---------------------------------------------------------------------------
// control
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlConfig {
    pub tau: f64,
    pub horizon: f64,
    pub omega: [f64; 2],
    pub initial_position: Vec<f64>,
    pub initial_velocity: Vec<f64>,
    pub target_position: Vec<f64>,
    pub target_velocity: Vec<f64>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_norm")]
    pub norm: StateNorm,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
}

fn default_epsilon() -> f64 {
    1e-6
}

fn default_norm() -> StateNorm {
    StateNorm::Energy
}

pub struct ControlPlan {
    pub problem: impulsewave::ControlProblem,
    pub epsilon: f64,
    pub norm: StateNorm,
}

impl ControlConfig {
    pub fn plan(&self) -> Result<ControlPlan, CliError> {
        let initial = parse_state(
            "initial_position",
            &self.initial_position,
            "initial_velocity",
            &self.initial_velocity,
        )?;
        let target = parse_state(
            "target_position",
            &self.target_position,
            "target_velocity",
            &self.target_velocity,
        )?;
        let omega = parse_interval("omega", self.omega)?;
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(CliError::invalid(
                "epsilon",
                format!("must be positive and finite, got {}", self.epsilon),
            ));
        }
        let problem =
            impulsewave::ControlProblem::new(self.tau, self.horizon, omega, initial, target)
                .map_err(|e| CliError::invalid("tau", e.to_string()))?;
        Ok(ControlPlan {
            problem,
            epsilon: self.epsilon,
            norm: self.norm,
        })
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Seed for the randomized property checks.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Interior grid points for the finite-difference cross-check.
    #[serde(default)]
    pub fd_grid_points: Option<usize>,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
}
