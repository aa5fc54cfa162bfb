//! Independent finite-difference oracle: a three-level leapfrog
//! discretization of the wave equation on (0, 1) with pinned ends and
//! velocity kicks injected at time-grid steps. It shares no arithmetic with
//! the modal path — second-order differences on a uniform interior grid
//! versus exact per-mode rotations — which is what makes agreement between
//! the two a meaningful cross-check rather than a tautology.

use crate::modal::Field;
use crate::solver::Trajectory;
use crate::{Error, Result};

/// Discretization parameters: M interior points (dx = 1/(M+1)) and the
/// Courant number cfl = dt/dx ∈ (0, 1] fixing the time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    grid_points: usize,
    cfl: f64,
    snap_tol: f64,
    dx: f64,
    dt: f64,
}

impl FdConfig {
    /// `snap_tol` bounds how far an impulse time may sit from the time step
    /// it snaps to before the run refuses it; offsets within the tolerance
    /// are recorded in the solution rather than hidden.
    pub fn new(grid_points: usize, cfl: f64, snap_tol: f64) -> Result<Self> {
        if grid_points < 2 {
            return Err(Error::GridTooCoarse {
                needed: 2,
                actual: grid_points,
            });
        }
        if !cfl.is_finite() || cfl <= 0.0 || cfl > 1.0 {
            return Err(Error::BadCfl { value: cfl });
        }
        if !snap_tol.is_finite() || snap_tol < 0.0 {
            return Err(Error::InvalidParameter {
                name: "snap_tol",
                message: format!("must be finite and nonnegative, got {snap_tol}"),
            });
        }
        let dx = 1.0 / (grid_points + 1) as f64;
        Ok(Self {
            grid_points,
            cfl,
            snap_tol,
            dx,
            dt: cfl * dx,
        })
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    pub fn cfl(&self) -> f64 {
        self.cfl
    }

    pub fn snap_tol(&self) -> f64 {
        self.snap_tol
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }
}

/// A velocity kick as a grid function: at `time`, the discrete velocity
/// jumps by `values` (the masked profile sampled at the interior points).
#[derive(Debug, Clone, PartialEq)]
pub struct GridImpulse {
    pub time: f64,
    pub values: Vec<f64>,
}

/// Result of a leapfrog run.
#[derive(Debug, Clone, PartialEq)]
pub struct FdSolution {
    /// Interior grid x_j = j·dx, j = 1..=M.
    pub grid: Vec<f64>,
    /// The requested sample times, in the order given.
    pub times: Vec<f64>,
    /// Displacement on `grid` at each sample time (linear interpolation
    /// between the two bracketing time levels).
    pub frames: Vec<Vec<f64>>,
    /// Largest relative drift of the scheme's conserved discrete energy
    /// within any impulse-free span of the run.
    pub energy_drift: f64,
    /// Per-impulse distance from the requested time to the step it snapped
    /// to, in the order the impulses were given.
    pub snap_offsets: Vec<f64>,
}

/// The interior grid x_j = j/(m+1), j = 1..=m.
pub fn interior_grid(m: usize) -> Vec<f64> {
    let dx = 1.0 / (m + 1) as f64;
    (1..=m).map(|j| j as f64 * dx).collect()
}

/// The discrete energy conserved by the leapfrog update between two adjacent
/// time levels: (dx/2)·Σ((b−a)/dt)² + (dx/2)·Σ_faces slope(a)·slope(b), face
/// sums including the pinned boundary values. Constant across impulse-free
/// updates in exact arithmetic for any cfl ≤ 1.
fn mixed_energy(a: &[f64], b: &[f64], config: &FdConfig) -> f64 {
    let m = a.len();
    let dx = config.dx;
    let dt = config.dt;
    let mut kinetic = 0.0;
    for i in 0..m {
        let v = (b[i] - a[i]) / dt;
        kinetic += v * v;
    }
    let mut crossed = 0.0;
    for f in 0..=m {
        let a_lo = if f == 0 { 0.0 } else { a[f - 1] };
        let a_hi = if f == m { 0.0 } else { a[f] };
        let b_lo = if f == 0 { 0.0 } else { b[f - 1] };
        let b_hi = if f == m { 0.0 } else { b[f] };
        crossed += ((a_hi - a_lo) / dx) * ((b_hi - b_lo) / dx);
    }
    0.5 * dx * (kinetic + crossed)
}

/// Runs the three-level leapfrog scheme from sampled initial displacement
/// and velocity, injecting each impulse at its nearest time step (the update
/// leaving that step gains +dt·g, so the centered discrete velocity jumps by
/// g while the displacement level is untouched), and returns displacement
/// frames at the requested sample times.
pub fn fd_solve(
    initial_pos: &[f64],
    initial_vel: &[f64],
    impulses: &[GridImpulse],
    config: &FdConfig,
    sample_times: &[f64],
) -> Result<FdSolution> {
    let m = config.grid_points;
    for (what, data) in [
        ("initial displacement samples", initial_pos),
        ("initial velocity samples", initial_vel),
    ] {
        if data.len() != m {
            return Err(Error::DimensionMismatch {
                what,
                expected: m,
                actual: data.len(),
            });
        }
        for &u in data {
            if !u.is_finite() {
                return Err(Error::NonFinite {
                    what: "grid sample",
                    value: u,
                });
            }
        }
    }
    for &t in sample_times {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidParameter {
                name: "sample_times",
                message: format!("sample times must be finite and nonnegative, got {t}"),
            });
        }
    }

    let dt = config.dt;
    // Map each impulse to its time step; the kick applies to the update that
    // leaves that step, so step 0 (whose update is the Taylor start) is out.
    let mut kicks: std::collections::BTreeMap<usize, Vec<f64>> = std::collections::BTreeMap::new();
    let mut snap_offsets = Vec::with_capacity(impulses.len());
    for imp in impulses {
        if !imp.time.is_finite() || imp.time <= 0.0 {
            return Err(Error::NonPositive {
                what: "impulse time",
                value: imp.time,
            });
        }
        if imp.values.len() != m {
            return Err(Error::DimensionMismatch {
                what: "impulse grid values",
                expected: m,
                actual: imp.values.len(),
            });
        }
        for &g in &imp.values {
            if !g.is_finite() {
                return Err(Error::NonFinite {
                    what: "impulse grid value",
                    value: g,
                });
            }
        }
        let step = (imp.time / dt).round();
        let offset = imp.time - step * dt;
        if offset.abs() > config.snap_tol {
            return Err(Error::SnapToleranceExceeded {
                requested: imp.time,
                offset,
                tol: config.snap_tol,
            });
        }
        snap_offsets.push(offset);
        let step = step as usize;
        if step == 0 {
            return Err(Error::InvalidParameter {
                name: "impulse time",
                message: format!(
                    "time {} snaps to the initial level; kicks must land on step 1 or later",
                    imp.time
                ),
            });
        }
        let entry = kicks.entry(step).or_insert_with(|| vec![0.0; m]);
        for (e, v) in entry.iter_mut().zip(&imp.values) {
            *e += v;
        }
    }

    let t_end = sample_times.iter().copied().fold(0.0, f64::max);
    let n_steps = ((t_end / dt).ceil() as usize).max(1);

    // Sample bookkeeping: times sorted, filled as the march passes them.
    let mut order: Vec<usize> = (0..sample_times.len()).collect();
    order.sort_by(|&a, &b| sample_times[a].partial_cmp(&sample_times[b]).unwrap());
    let mut frames: Vec<Vec<f64>> = vec![Vec::new(); sample_times.len()];
    let mut next_sample = 0usize;

    let lam2 = config.cfl * config.cfl;
    let mut prev = initial_pos.to_vec();
    let mut curr = initial_pos.to_vec();
    let mut drift: f64 = 0.0;
    let mut span_ref: Option<f64> = None;

    for k in 0..n_steps {
        let mut next = vec![0.0; m];
        if k == 0 {
            // Second-order Taylor start: u¹ = u⁰ + dt·v⁰ + (dt²/2)·Δu⁰.
            for i in 0..m {
                let left = if i == 0 { 0.0 } else { curr[i - 1] };
                let right = if i + 1 == m { 0.0 } else { curr[i + 1] };
                next[i] =
                    curr[i] + dt * initial_vel[i] + 0.5 * lam2 * (left - 2.0 * curr[i] + right);
            }
        } else {
            for i in 0..m {
                let left = if i == 0 { 0.0 } else { curr[i - 1] };
                let right = if i + 1 == m { 0.0 } else { curr[i + 1] };
                next[i] = 2.0 * curr[i] - prev[i] + lam2 * (left - 2.0 * curr[i] + right);
            }
        }
        let kicked = if let Some(g) = kicks.get(&k) {
            for (u, gi) in next.iter_mut().zip(g) {
                *u += dt * gi;
            }
            true
        } else {
            false
        };

        // Emit frames whose time lies within [k·dt, (k+1)·dt); the final
        // interval also owns its right endpoint.
        while next_sample < order.len() {
            let idx = order[next_sample];
            let pos = sample_times[idx] / dt - k as f64;
            if pos > 1.0 && k + 1 < n_steps {
                break;
            }
            let theta = pos.clamp(0.0, 1.0);
            frames[idx] = curr
                .iter()
                .zip(&next)
                .map(|(a, b)| (1.0 - theta) * a + theta * b)
                .collect();
            next_sample += 1;
        }

        // Conserved-energy monitoring; a kick legitimately moves the energy,
        // so it starts a new reference span.
        let e = mixed_energy(&curr, &next, config);
        if kicked || span_ref.is_none() {
            span_ref = Some(e);
        } else if let Some(r) = span_ref {
            let d = (e - r).abs() / r.abs().max(f64::MIN_POSITIVE);
            drift = drift.max(d);
        }

        prev = std::mem::replace(&mut curr, next);
    }

    Ok(FdSolution {
        grid: interior_grid(m),
        times: sample_times.to_vec(),
        frames,
        energy_drift: drift,
        snap_offsets,
    })
}

/// Per-time relative L² distance between the spectral trajectory and the fd
/// frames, on the fd grid with the trapezoid norm (boundary values are
/// pinned to zero, so the norm is dx·Σ over interior points). When the
/// spectral reference vanishes identically at a time, the absolute L²
/// distance is reported instead.
pub fn compare(spectral: &Trajectory, fd: &FdSolution, times: &[f64]) -> Result<Vec<f64>> {
    let m = fd.grid.len();
    let dx = 1.0 / (m + 1) as f64;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let idx = fd
            .times
            .iter()
            .position(|&ft| (ft - t).abs() <= 1e-12)
            .ok_or_else(|| Error::InvalidParameter {
                name: "times",
                message: format!("time {t} was not sampled by the fd run"),
            })?;
        let frame = &fd.frames[idx];
        if frame.len() != m {
            return Err(Error::DimensionMismatch {
                what: "fd frame",
                expected: m,
                actual: frame.len(),
            });
        }
        let reference = spectral.state_at(t)?.evaluate(&fd.grid, Field::Position)?;
        let mut err2 = 0.0;
        let mut ref2 = 0.0;
        for (r, f) in reference.iter().zip(frame) {
            err2 += (r - f) * (r - f);
            ref2 += r * r;
        }
        let err = (dx * err2).sqrt();
        let norm = (dx * ref2).sqrt();
        out.push(if norm > 0.0 { err / norm } else { err });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modal::{ModalState, SubInterval};
    use crate::solver::{solve, ImpulseEvent, ImpulseSchedule};
    use std::f64::consts::PI;

    fn relative_l2(got: &[f64], want: &[f64]) -> f64 {
        let mut err2 = 0.0;
        let mut ref2 = 0.0;
        for (g, w) in got.iter().zip(want) {
            err2 += (g - w) * (g - w);
            ref2 += w * w;
        }
        (err2 / ref2).sqrt()
    }

    #[test]
    fn zero_data_stays_zero() {
        let m = 64;
        let config = FdConfig::new(m, 0.5, 0.0).unwrap();
        let sol = fd_solve(&vec![0.0; m], &vec![0.0; m], &[], &config, &[0.0, 0.7, 1.9]).unwrap();
        for frame in &sol.frames {
            assert!(frame.iter().all(|&u| u == 0.0));
        }
        assert_eq!(sol.energy_drift, 0.0);
        assert!(sol.snap_offsets.is_empty());
    }

    #[test]
    fn single_mode_returns_after_one_period() {
        let m = 2048;
        let config = FdConfig::new(m, 0.5, 0.0).unwrap();
        let grid = interior_grid(m);
        let u0: Vec<f64> = grid.iter().map(|&x| (PI * x).sin()).collect();
        let sol = fd_solve(&u0, &vec![0.0; m], &[], &config, &[2.0]).unwrap();
        let err = relative_l2(&sol.frames[0], &u0);
        assert!(err <= 1e-4, "period-return error {err}");
        assert!(
            sol.energy_drift <= 1e-6,
            "energy drift {}",
            sol.energy_drift
        );
    }

    #[test]
    fn error_against_exact_solution_shrinks_at_second_order() {
        // u(x,t) = sin(πx)·cos(πt); fix cfl so dt halves with dx. The sample
        // time is a step multiple at every resolution (dt is a power of two),
        // so the measurement sees the scheme error alone and not the
        // resolution-dependent frame-interpolation remainder.
        let t = 0.75;
        let mut errors = Vec::new();
        for m in [255usize, 511, 1023] {
            let config = FdConfig::new(m, 0.5, 0.0).unwrap();
            let grid = interior_grid(m);
            let u0: Vec<f64> = grid.iter().map(|&x| (PI * x).sin()).collect();
            let sol = fd_solve(&u0, &vec![0.0; m], &[], &config, &[t]).unwrap();
            let exact: Vec<f64> = grid
                .iter()
                .map(|&x| (PI * x).sin() * (PI * t).cos())
                .collect();
            errors.push(relative_l2(&sol.frames[0], &exact));
        }
        for pair in errors.windows(2) {
            let ratio = pair[0] / pair[1];
            assert!(
                (3.5..=4.5).contains(&ratio),
                "convergence ratio {ratio} outside [3.5, 4.5] (errors {errors:?})"
            );
        }
    }

    #[test]
    fn full_domain_kick_matches_spectral_anchor() {
        // Zero data, kick sin(πx) at τ = 0.5 on the whole domain: the modal
        // solution at t = 1 is (1/π)·sin(πx).
        let m = 256;
        let config = FdConfig::new(m, 0.5, 1e-9).unwrap();
        let grid = interior_grid(m);
        let kick: Vec<f64> = grid.iter().map(|&x| (PI * x).sin()).collect();
        let sol = fd_solve(
            &vec![0.0; m],
            &vec![0.0; m],
            &[GridImpulse {
                time: 0.5,
                values: kick,
            }],
            &config,
            &[0.25, 1.0],
        )
        .unwrap();
        assert!(sol.snap_offsets[0].abs() <= 1e-12);
        assert!(sol.energy_drift <= 1e-6);

        let schedule = ImpulseSchedule::new(
            1.0,
            vec![ImpulseEvent::new(0.5, vec![1.0], SubInterval::full()).unwrap()],
        )
        .unwrap();
        let trajectory = solve(&ModalState::zero(1).unwrap(), &schedule).unwrap();
        let errs = compare(&trajectory, &sol, &[0.25, 1.0]).unwrap();
        // Before the kick both sides are exactly zero; the zero-reference
        // comparison falls back to the absolute distance.
        assert_eq!(errs[0], 0.0);
        assert!(errs[1] <= 1e-3, "post-kick error {}", errs[1]);
    }

    #[test]
    fn frames_at_time_zero_reproduce_the_samples() {
        let m = 32;
        let config = FdConfig::new(m, 0.8, 0.0).unwrap();
        let grid = interior_grid(m);
        let u0: Vec<f64> = grid.iter().map(|&x| (PI * x).sin()).collect();
        let sol = fd_solve(&u0, &vec![0.0; m], &[], &config, &[0.0]).unwrap();
        assert_eq!(sol.frames[0], u0);

        // Identical inputs compare to zero: the t = 0 frame against the
        // modal state whose first coefficient synthesizes the same samples.
        let trajectory = solve(
            &ModalState::new(vec![1.0], vec![0.0]).unwrap(),
            &ImpulseSchedule::free(1.0).unwrap(),
        )
        .unwrap();
        let errs = compare(&trajectory, &sol, &[0.0]).unwrap();
        assert_eq!(errs[0], 0.0);
    }

    #[test]
    fn snapping_is_policed_and_recorded() {
        let m = 32;
        let config = FdConfig::new(m, 0.5, 0.0).unwrap();
        let dt = config.dt();
        let off_grid = 10.25 * dt;
        let kick = vec![1.0; m];
        let err = fd_solve(
            &vec![0.0; m],
            &vec![0.0; m],
            &[GridImpulse {
                time: off_grid,
                values: kick.clone(),
            }],
            &config,
            &[1.0],
        )
        .unwrap_err();
        assert!(matches!(err, Error::SnapToleranceExceeded { .. }));

        let tolerant = FdConfig::new(m, 0.5, dt).unwrap();
        let sol = fd_solve(
            &vec![0.0; m],
            &vec![0.0; m],
            &[GridImpulse {
                time: off_grid,
                values: kick,
            }],
            &tolerant,
            &[1.0],
        )
        .unwrap();
        assert!((sol.snap_offsets[0] - 0.25 * dt).abs() <= 1e-12);
    }

    #[test]
    fn configuration_validation() {
        assert!(matches!(
            FdConfig::new(32, 1.5, 0.0),
            Err(Error::BadCfl { .. })
        ));
        assert!(matches!(
            FdConfig::new(32, 0.0, 0.0),
            Err(Error::BadCfl { .. })
        ));
        assert!(matches!(
            FdConfig::new(1, 0.5, 0.0),
            Err(Error::GridTooCoarse { .. })
        ));
        assert!(FdConfig::new(2, 1.0, 0.0).is_ok());

        let config = FdConfig::new(8, 0.5, 0.0).unwrap();
        assert!(fd_solve(&[0.0; 7], &[0.0; 8], &[], &config, &[1.0]).is_err());
        assert!(fd_solve(&[0.0; 8], &[0.0; 8], &[], &config, &[-1.0]).is_err());
        assert!(fd_solve(
            &[0.0; 8],
            &[0.0; 8],
            &[GridImpulse {
                time: -0.5,
                values: vec![0.0; 8]
            }],
            &config,
            &[1.0]
        )
        .is_err());
    }
}
