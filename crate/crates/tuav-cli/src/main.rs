//! Command-line frontend: run scenarios, summarize exported telemetry and
//! list the built-in configurations.
//!
//! Exit codes: 0 success, 2 configuration/usage error, 3 numerical failure
//! during integration, 4 infeasible tether geometry.

mod config;
mod export;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tuav_core::scenarios;
use tuav_core::sim::{self, Metrics, SimLog};
use tuav_core::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_GEOMETRY: u8 = 4;

#[derive(Parser)]
#[command(
    name = "tuav",
    about = "Closed-loop simulator for a tethered UAV with a ground winch",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario described by a configuration file and export telemetry.
    Run {
        /// Configuration file (`key = value` text).
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to $TUAV_OUT or ./out.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit every Nth tick as an animation frame.
        #[arg(long, default_value_t = 50)]
        frame_stride: usize,
        /// Points sampled along the tether per frame.
        #[arg(long, default_value_t = 100)]
        tether_samples: usize,
        /// Skip the telemetry CSV.
        #[arg(long)]
        skip_csv: bool,
        /// Skip the animation frames.
        #[arg(long)]
        skip_frames: bool,
        /// Skip the metrics report.
        #[arg(long)]
        skip_metrics: bool,
    },
    /// Recompute tracking metrics from an exported telemetry CSV.
    Metrics {
        /// Telemetry CSV produced by `run`.
        #[arg(long)]
        log: PathBuf,
    },
    /// List the built-in scenarios.
    Scenarios,
}

fn exit_code_for(error: &Error) -> u8 {
    match error {
        Error::OverLength { .. }
        | Error::InfeasibleSlack { .. }
        | Error::DegenerateVertical
        | Error::DegenerateGeometry => EXIT_GEOMETRY,
        Error::Domain { .. } => EXIT_CONFIG,
        Error::NumericalBlowup { .. }
        | Error::NoConvergence { .. }
        | Error::Singularity { .. }
        | Error::ThrustInversion { .. }
        | Error::SpoolRange { .. } => EXIT_NUMERICAL,
    }
}

fn print_metrics(metrics: &Metrics) {
    println!(
        "{:<8} {:>12} {:>14} {:>14}",
        "channel", "settling [s]", "terminal |e|", "rms (settled)"
    );
    for channel in &metrics.channels {
        let settling = match channel.settling_time {
            Some(t) => format!("{t:.3}"),
            None => "unsettled".to_string(),
        };
        println!(
            "{:<8} {:>12} {:>14.6e} {:>14.6e}",
            channel.name, settling, channel.steady_state_error, channel.rms_after_settling
        );
    }
    println!(
        "max positive dV/dt: V_c1 {:.3e}, V_c2 {:.3e}, V_c12 {:.3e}",
        metrics.max_lyapunov_rate[0], metrics.max_lyapunov_rate[1], metrics.max_lyapunov_rate[2]
    );
}

fn metrics_report(metrics: &Metrics) -> String {
    let mut text = String::new();
    for channel in &metrics.channels {
        let settling = match channel.settling_time {
            Some(t) => format!("{t:.6}"),
            None => "unsettled".to_string(),
        };
        text.push_str(&format!(
            "{} settling={} terminal={:.6e} rms={:.6e}\n",
            channel.name, settling, channel.steady_state_error, channel.rms_after_settling
        ));
    }
    text.push_str(&format!(
        "max_dv_c1={:.6e} max_dv_c2={:.6e} max_dv_c12={:.6e}\n",
        metrics.max_lyapunov_rate[0], metrics.max_lyapunov_rate[1], metrics.max_lyapunov_rate[2]
    ));
    text
}

fn export_outputs(
    log: &SimLog,
    out_dir: &Path,
    frame_stride: usize,
    tether_samples: usize,
    skip_csv: bool,
    skip_frames: bool,
    skip_metrics: bool,
) -> std::io::Result<()> {
    if !skip_csv {
        let path = out_dir.join("telemetry.csv");
        let rows = export::export_csv(log, &path)?;
        println!("wrote {} rows to {}", rows, path.display());
    }
    if !skip_frames {
        let path = out_dir.join("frames.jsonl");
        let frames = export::export_frames(log, &path, frame_stride, tether_samples)?;
        println!("wrote {} frames to {}", frames, path.display());
    }
    if !skip_metrics {
        let metrics = sim::compute_metrics(log);
        let path = out_dir.join("metrics.txt");
        std::fs::write(&path, metrics_report(&metrics))?;
        print_metrics(&metrics);
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_command(
    config_path: &Path,
    out: Option<PathBuf>,
    frame_stride: usize,
    tether_samples: usize,
    skip_csv: bool,
    skip_frames: bool,
    skip_metrics: bool,
) -> u8 {
    let config = match config::parse_config(config_path) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return EXIT_CONFIG;
        }
    };
    let out_dir = out
        .or_else(|| std::env::var_os("TUAV_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    if let Err(e) = std::fs::create_dir_all(&out_dir) {
        eprintln!("cannot create output directory {}: {e}", out_dir.display());
        return EXIT_CONFIG;
    }

    if tether_samples < 2 {
        eprintln!("--tether-samples must be at least 2");
        return EXIT_CONFIG;
    }

    let (log, status) = match sim::run_closed_loop(&config) {
        Ok(log) => (log, 0),
        Err(failure) => {
            eprintln!("{failure}");
            let code = exit_code_for(&failure.error);
            (failure.partial, code)
        }
    };

    for event in &log.events {
        eprintln!("event: {event:?}");
    }
    if let Err(e) = export_outputs(
        &log,
        &out_dir,
        frame_stride,
        tether_samples,
        skip_csv,
        skip_frames,
        skip_metrics,
    ) {
        eprintln!("export failed: {e}");
        return EXIT_CONFIG;
    }
    status
}

fn metrics_command(log_path: &Path) -> u8 {
    match export::import_csv(log_path) {
        Ok(log) => {
            print_metrics(&sim::compute_metrics(&log));
            0
        }
        Err(e) => {
            eprintln!("cannot read telemetry: {e}");
            EXIT_CONFIG
        }
    }
}

fn scenarios_command() -> u8 {
    for name in scenarios::NAMES {
        println!("{:<13} {}", name, scenarios::describe(name).unwrap());
    }
    0
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run {
            config,
            out,
            frame_stride,
            tether_samples,
            skip_csv,
            skip_frames,
            skip_metrics,
        } => run_command(
            &config,
            out,
            frame_stride,
            tether_samples,
            skip_csv,
            skip_frames,
            skip_metrics,
        ),
        Command::Metrics { log } => metrics_command(&log),
        Command::Scenarios => scenarios_command(),
    };
    ExitCode::from(code)
}
