//! Piecewise-exact solution of the wave system with impulsive velocity
//! forcing.
//!
//! Between impulse times the state follows the exact free flow; at each
//! impulse time t_k the velocity coefficients gain the sine-basis expansion of
//! the masked profile, 2·E_ω·c (E_ω the restricted mass matrix), while the
//! position coefficients are continuous. Trajectories are sampled
//! left-continuously at the jump times, with an explicit side parameter for
//! the right limits.

use std::fmt;

use serde::Serialize;

use crate::modal::{MassMatrix, ModalState, SubInterval};
use crate::{Error, Result};

/// Minimum separation enforced between consecutive impulse times (and between
/// zero and the first impulse). Closer events are rejected, not merged.
pub const MIN_EVENT_GAP: f64 = 1e-12;

/// Which one-sided limit to report at an impulse time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Pre-jump limit; the default sampling convention.
    Left,
    /// Post-jump limit.
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// A velocity impulse: at `time` the velocity field gains the restriction to
/// `mask` of the sine synthesis of `profile`, projected back onto the modes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpulseEvent {
    time: f64,
    profile: Vec<f64>,
    mask: SubInterval,
}

impl ImpulseEvent {
    /// Builds an event; `time` must be finite and positive, the profile
    /// finite and nonempty. Placement within a horizon is validated by
    /// [`ImpulseSchedule::new`].
    pub fn new(time: f64, profile: Vec<f64>, mask: SubInterval) -> Result<Self> {
        if !time.is_finite() {
            return Err(Error::NonFinite {
                what: "impulse time",
                value: time,
            });
        }
        if profile.is_empty() {
            return Err(Error::EmptyState);
        }
        for &c in &profile {
            if !c.is_finite() {
                return Err(Error::NonFinite {
                    what: "impulse profile coefficient",
                    value: c,
                });
            }
        }
        Ok(Self {
            time,
            profile,
            mask,
        })
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn profile(&self) -> &[f64] {
        &self.profile
    }

    pub fn mask(&self) -> SubInterval {
        self.mask
    }

    /// The realized velocity jump 2·E_mask·profile for an `n_modes`-mode run.
    pub fn velocity_jump(&self, n_modes: usize) -> Result<Vec<f64>> {
        if self.profile.len() != n_modes {
            return Err(Error::DimensionMismatch {
                what: "impulse profile",
                expected: n_modes,
                actual: self.profile.len(),
            });
        }
        let mass = MassMatrix::new(self.mask, n_modes);
        let mut jump = mass.apply(&self.profile)?;
        for d in &mut jump {
            *d *= 2.0;
        }
        Ok(jump)
    }
}

/// A finite set of impulses inside a horizon: 0 < t_1 < … < t_n < T, with
/// strict increase enforced up to [`MIN_EVENT_GAP`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpulseSchedule {
    horizon: f64,
    events: Vec<ImpulseEvent>,
}

impl ImpulseSchedule {
    pub fn new(horizon: f64, events: Vec<ImpulseEvent>) -> Result<Self> {
        if !horizon.is_finite() || horizon <= 0.0 {
            return Err(Error::NonPositive {
                what: "horizon",
                value: horizon,
            });
        }
        let mut previous = 0.0;
        for (index, event) in events.iter().enumerate() {
            if event.time <= 0.0 || event.time >= horizon {
                return Err(Error::ImpulseTimeOutsideHorizon {
                    time: event.time,
                    horizon,
                });
            }
            if event.time - previous < MIN_EVENT_GAP {
                return Err(Error::ImpulseTimesTooClose {
                    index,
                    time: event.time,
                    previous,
                    min_gap: MIN_EVENT_GAP,
                });
            }
            previous = event.time;
        }
        Ok(Self { horizon, events })
    }

    /// A schedule with no impulses (pure free flow).
    pub fn free(horizon: f64) -> Result<Self> {
        Self::new(horizon, Vec::new())
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn events(&self) -> &[ImpulseEvent] {
        &self.events
    }
}

/// One smooth piece of a trajectory: the free flow on [start, end], with
/// `state` the value at `start` (post-jump when `start` is an impulse time).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub state: ModalState,
}

/// Piecewise-smooth solution of an impulse schedule.
///
/// Holds one segment per impulse-free span; values at arbitrary times come
/// from exact propagation within the covering segment. Sampling at an impulse
/// time defaults to the left (pre-jump) limit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    horizon: f64,
    segments: Vec<Segment>,
    events: Vec<ImpulseEvent>,
    /// Marker for the default one-sided limit reported at impulse times.
    sample_convention: Side,
}

/// Solves the impulsive system: free flow interleaved with masked velocity
/// kicks at the scheduled times.
pub fn solve(initial: &ModalState, schedule: &ImpulseSchedule) -> Result<Trajectory> {
    let n = initial.n_modes();
    let mut segments = Vec::with_capacity(schedule.events.len() + 1);
    let mut current = initial.clone();
    let mut start = 0.0;
    for event in &schedule.events {
        segments.push(Segment {
            start,
            end: event.time,
            state: current.clone(),
        });
        let pre = current.propagate(event.time - start)?;
        current = pre.with_velocity_kick(&event.velocity_jump(n)?);
        start = event.time;
    }
    segments.push(Segment {
        start,
        end: schedule.horizon,
        state: current,
    });
    Ok(Trajectory {
        horizon: schedule.horizon,
        segments,
        events: schedule.events.clone(),
        sample_convention: Side::Left,
    })
}

impl Trajectory {
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn n_modes(&self) -> usize {
        self.segments[0].state.n_modes()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn events(&self) -> &[ImpulseEvent] {
        &self.events
    }

    /// The default one-sided limit used when no side is named.
    pub fn sample_convention(&self) -> Side {
        self.sample_convention
    }

    /// State at time `t` with the requested one-sided limit; the limits only
    /// differ at impulse times.
    pub fn value_at(&self, t: f64, side: Side) -> Result<ModalState> {
        if !(0.0 <= t && t <= self.horizon) {
            return Err(Error::TimeOutsideHorizon {
                time: t,
                horizon: self.horizon,
            });
        }
        let mut index = 0;
        for (i, segment) in self.segments.iter().enumerate() {
            let covers = match side {
                Side::Left => segment.start < t,
                Side::Right => segment.start <= t,
            };
            if covers {
                index = i;
            } else {
                break;
            }
        }
        let segment = &self.segments[index];
        segment.state.propagate(t - segment.start)
    }

    /// State at `t` under the default (left-continuous) convention.
    pub fn state_at(&self, t: f64) -> Result<ModalState> {
        self.value_at(t, self.sample_convention)
    }

    /// Self-check of the k-th jump: recomputes the two one-sided limits and
    /// the expected velocity jump, returning
    /// (max |position jump|, max |velocity jump − expected jump|).
    /// Both are ≤ 1e-12 for a correctly assembled trajectory.
    pub fn jump_residual(&self, k: usize) -> Result<(f64, f64)> {
        if k >= self.events.len() {
            return Err(Error::JumpIndexOutOfRange {
                index: k,
                count: self.events.len(),
            });
        }
        let event = &self.events[k];
        let before = &self.segments[k];
        let left = before.state.propagate(event.time - before.start)?;
        let right = &self.segments[k + 1].state;
        let expected = event.velocity_jump(self.n_modes())?;

        let pos_res = right
            .position_coeffs()
            .iter()
            .zip(left.position_coeffs())
            .map(|(r, l)| (r - l).abs())
            .fold(0.0, f64::max);
        let vel_res = right
            .velocity_coeffs()
            .iter()
            .zip(left.velocity_coeffs())
            .zip(&expected)
            .map(|((r, l), e)| (r - l - e).abs())
            .fold(0.0, f64::max);
        Ok((pos_res, vel_res))
    }

    /// Energy (squared state-space norm) sampled at the given times under the
    /// default convention; piecewise constant between impulses.
    pub fn energy_profile(&self, sample_times: &[f64]) -> Result<Vec<f64>> {
        sample_times
            .iter()
            .map(|&t| Ok(self.state_at(t)?.energy()))
            .collect()
    }
}
