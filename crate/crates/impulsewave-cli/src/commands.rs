//! The four data-producing subcommands. Each returns the rendered output
//! document as a string; floats go through the standard shortest round-trip
//! formatting so identical configs yield byte-identical files.

use crate::config::{
    ControlConfig, ObserveConfig, OutputFormat, SideChoice, SimulateConfig, SweepConfig,
};
use crate::record::CliError;
use impulsewave::{
    approx_control, obs_ratio, observation_seminorm_sq, observed_energy, phase_decomposition,
    solve, sweep_ratio, Side, WeakNormConvention,
};
use serde::Serialize;

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::new("serialize", "out", e.to_string()))
}

fn library_error(e: impulsewave::Error) -> CliError {
    CliError::new("compute", "config", e.to_string())
}

pub fn run_simulate(cfg: &SimulateConfig, format: OutputFormat) -> Result<String, CliError> {
    let plan = cfg.plan()?;
    let traj = solve(&plan.initial, &plan.schedule).map_err(library_error)?;
    match format {
        OutputFormat::Json => to_json(&traj),
        OutputFormat::Csv => {
            let sides: &[(Side, &str)] = match plan.sides {
                SideChoice::Left => &[(Side::Left, "left")],
                SideChoice::Right => &[(Side::Right, "right")],
                SideChoice::Both => &[(Side::Left, "left"), (Side::Right, "right")],
            };
            let mut out = String::from("t,side,mode,a,b\n");
            for &t in &plan.sample_times {
                for &(side, side_name) in sides {
                    let state = traj.value_at(t, side).map_err(library_error)?;
                    for mode in 0..state.n_modes() {
                        out.push_str(&format!(
                            "{t},{side_name},{},{},{}\n",
                            mode + 1,
                            state.position_coeffs()[mode],
                            state.velocity_coeffs()[mode],
                        ));
                    }
                }
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct PhaseRow {
    mode: usize,
    amplitude: f64,
    sin: Option<f64>,
    cos: Option<f64>,
}

#[derive(Serialize)]
struct ObserveReport {
    observed_energy: f64,
    /// None when the state has no weak norm to divide by.
    obs_ratio: Option<f64>,
    observation_seminorm_sq: f64,
    weak_norm_sq: f64,
    modes: Vec<PhaseRow>,
}

pub fn run_observe(cfg: &ObserveConfig, format: OutputFormat) -> Result<String, CliError> {
    let plan = cfg.plan()?;
    let energy = observed_energy(&plan.state, &plan.setup).map_err(library_error)?;
    let weak = plan.state.weak_norm_sq(WeakNormConvention::Coefficient);
    let ratio = if weak > 0.0 {
        Some(obs_ratio(&plan.state, &plan.setup).map_err(library_error)?)
    } else {
        None
    };
    let seminorm = observation_seminorm_sq(&plan.state, &plan.setup).map_err(library_error)?;
    let modes: Vec<PhaseRow> = phase_decomposition(&plan.state)
        .iter()
        .enumerate()
        .map(|(i, p)| match p {
            Some(p) => PhaseRow {
                mode: i + 1,
                amplitude: p.amplitude,
                sin: Some(p.sin_y),
                cos: Some(p.cos_y),
            },
            None => PhaseRow {
                mode: i + 1,
                amplitude: 0.0,
                sin: None,
                cos: None,
            },
        })
        .collect();
    let report = ObserveReport {
        observed_energy: energy,
        obs_ratio: ratio,
        observation_seminorm_sq: seminorm,
        weak_norm_sq: weak,
        modes,
    };
    match format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => {
            let mut out = String::from("mode,amplitude,sin,cos\n");
            for row in &report.modes {
                let sin = row.sin.map(|v| v.to_string()).unwrap_or_default();
                let cos = row.cos.map(|v| v.to_string()).unwrap_or_default();
                out.push_str(&format!("{},{},{sin},{cos}\n", row.mode, row.amplitude));
            }
            out.push_str("observed_energy,obs_ratio,seminorm_sq,weak_norm_sq\n");
            let ratio = report.obs_ratio.map(|v| v.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{ratio},{},{}\n",
                report.observed_energy, report.observation_seminorm_sq, report.weak_norm_sq
            ));
            Ok(out)
        }
    }
}

pub fn run_sweep(cfg: &SweepConfig, format: OutputFormat) -> Result<String, CliError> {
    let plan = cfg.plan()?;
    let report = sweep_ratio(plan.family, plan.n_max, &plan.setup).map_err(library_error)?;
    match format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => {
            let mut out = String::from("family,N,ratio\n");
            for (i, ratio) in report.ratios.iter().enumerate() {
                out.push_str(&format!("{},{},{ratio}\n", report.family, i + 1));
            }
            out.push_str("min_ratio,strictly_increasing\n");
            out.push_str(&format!(
                "{},{}\n",
                report.min_ratio, report.strictly_increasing
            ));
            Ok(out)
        }
    }
}

pub fn run_control(cfg: &ControlConfig, format: OutputFormat) -> Result<String, CliError> {
    let plan = cfg.plan()?;
    let outcome = approx_control(&plan.problem, plan.epsilon, plan.norm).map_err(library_error)?;
    match format {
        OutputFormat::Json => to_json(&outcome),
        OutputFormat::Csv => {
            let mut out = String::from("alpha,residual\n");
            for step in outcome.trace() {
                out.push_str(&format!("{},{}\n", step.alpha, step.residual));
            }
            Ok(out)
        }
    }
}
