//! `critlab`: batch experiments on Anosov representations of surface groups.
//!
//! Exit codes: 0 success, 1 i/o failure, 2 configuration error, 3 numeric failure.

mod commands;
mod config;
mod inputs;
mod output;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Failure, RunConfig, Settings};
use output::Run;

#[derive(Parser)]
#[command(name = "critlab", version, about = "Critical exponents, limit curves and positivity for surface group representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    #[command(flatten)]
    settings: Settings,
    /// TOML file; its keys override flags
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Orbit table by word length (orbit.csv), resumable
    Orbit {
        #[command(flatten)]
        common: Common,
        /// Continue from orbit.ckpt in the output directory
        #[arg(long)]
        resume: bool,
        /// Stop after writing this length (simulates an interrupted run)
        #[arg(long, hide = true)]
        stop_after: Option<usize>,
    },
    /// Critical exponent estimates per functional
    Critexp(Common),
    /// Sampled limit curve in Gr(k, d) (curve.csv)
    Limitcurve(Common),
    /// Box-counting dimension of the limit curve
    Dimension(Common),
    /// Regular-distortion and shadow-mass scans
    Shadows(Common),
    /// Totally positive factorization round trip
    Tp(Common),
    /// Doubled group across boundary reflections (doubled.csv)
    Double(Common),
    /// Removable-index sampling for the positive-definite cone
    Conerank(Common),
    /// Text and SVG plot of log N(T) from a CSV
    Plot(Common),
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (name, common) = match &cli.command {
        Command::Orbit { common, .. } => ("orbit", common),
        Command::Critexp(c) => ("critexp", c),
        Command::Limitcurve(c) => ("limitcurve", c),
        Command::Dimension(c) => ("dimension", c),
        Command::Shadows(c) => ("shadows", c),
        Command::Tp(c) => ("tp", c),
        Command::Double(c) => ("double", c),
        Command::Conerank(c) => ("conerank", c),
        Command::Plot(c) => ("plot", c),
    };
    let cfg = RunConfig::resolve(name, common.settings.clone(), common.config.as_deref())?;
    cfg.window()?;
    let r = Run::new(cfg)?;
    match cli.command {
        Command::Orbit { resume, stop_after, .. } => commands::orbit(&r, resume, stop_after)?,
        Command::Critexp(_) => commands::critexp(&r)?,
        Command::Limitcurve(_) => commands::limitcurve(&r)?,
        Command::Dimension(_) => commands::dimension(&r)?,
        Command::Shadows(_) => commands::shadows(&r)?,
        Command::Tp(_) => commands::tp(&r)?,
        Command::Double(_) => commands::double(&r)?,
        Command::Conerank(_) => commands::conerank(&r)?,
        Command::Plot(_) => plot::plot(&r)?,
    }
    r.finish()
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("critlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
