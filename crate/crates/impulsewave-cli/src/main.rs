//! Command-line front end: five subcommands sharing a JSON-config/flag
//! interface. Exit codes: 0 on success, 1 when a verification check fails,
//! 2 on invalid input or I/O trouble (details as a JSON record on stderr).

mod commands;
mod config;
mod record;
mod verify;

use clap::{Args, Parser, Subcommand};
use config::OutputFormat;
use record::CliError;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "impulsewave",
    version,
    about = "Spectral solver and diagnostics for the impulsively forced vibrating string"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the JSON configuration file.
    #[arg(long)]
    config: PathBuf,

    /// Write the report here instead of stdout (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format (overrides the config).
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,

    /// Seed for randomized checks (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a trajectory with velocity impulses and sample it.
    Simulate(CommonArgs),
    /// Measure windowed velocity energy and its phase decomposition.
    Observe(CommonArgs),
    /// Ratio sweep of observed energy against the weak norm across truncations.
    Sweep(CommonArgs),
    /// Steer an initial state toward a target with regularized least squares.
    Control(CommonArgs),
    /// Run the built-in numerical check battery.
    Verify(CommonArgs),
}

/// Output-path resolution: `--out` flag, then config field, then stdout.
fn write_output(
    text: &str,
    flag: Option<&PathBuf>,
    from_config: Option<&String>,
) -> Result<(), CliError> {
    let target: Option<PathBuf> = flag.cloned().or_else(|| from_config.map(PathBuf::from));
    match target {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn resolve_format(
    flag: Option<OutputFormat>,
    from_config: Option<OutputFormat>,
    default: OutputFormat,
) -> OutputFormat {
    flag.or(from_config).unwrap_or(default)
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Simulate(args) => {
            let cfg: config::SimulateConfig = config::load(&args.config)?;
            let format = resolve_format(args.format, cfg.format, OutputFormat::Csv);
            let text = commands::run_simulate(&cfg, format)?;
            write_output(&text, args.out.as_ref(), cfg.out.as_ref())?;
            Ok(0)
        }
        Command::Observe(args) => {
            let cfg: config::ObserveConfig = config::load(&args.config)?;
            let format = resolve_format(args.format, cfg.format, OutputFormat::Json);
            let text = commands::run_observe(&cfg, format)?;
            write_output(&text, args.out.as_ref(), cfg.out.as_ref())?;
            Ok(0)
        }
        Command::Sweep(args) => {
            let cfg: config::SweepConfig = config::load(&args.config)?;
            let format = resolve_format(args.format, cfg.format, OutputFormat::Csv);
            let text = commands::run_sweep(&cfg, format)?;
            write_output(&text, args.out.as_ref(), cfg.out.as_ref())?;
            Ok(0)
        }
        Command::Control(args) => {
            let cfg: config::ControlConfig = config::load(&args.config)?;
            let format = resolve_format(args.format, cfg.format, OutputFormat::Json);
            let text = commands::run_control(&cfg, format)?;
            write_output(&text, args.out.as_ref(), cfg.out.as_ref())?;
            Ok(0)
        }
        Command::Verify(args) => {
            let cfg: config::VerifyConfig = config::load(&args.config)?;
            let format = resolve_format(args.format, cfg.format, OutputFormat::Json);
            let (text, all_pass) = verify::run_verify(&cfg, args.seed, format)?;
            write_output(&text, args.out.as_ref(), cfg.out.as_ref())?;
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            err.emit();
            2
        }
    };
    std::process::exit(code);
}
