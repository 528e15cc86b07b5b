//! `exodetect`: entropies, sweeps, figure data and Monte Carlo estimates from the command line.

mod entropy;
mod figure;
mod output;
mod simulate;
mod sweep;
mod svg;
mod validate;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use exodetect::{Alignment, Error, Scenario};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_ACCURACY: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Parser)]
#[command(name = "exodetect", version, about = "Error exponents for detecting a faint companion next to a bright source")]
struct Cli {
    /// Emit machine-readable JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one relative entropy (nats) for a scenario.
    Entropy(entropy::EntropyArgs),
    /// Evaluate relative entropies along one swept parameter and write CSV.
    Sweep(sweep::SweepArgs),
    /// Write the CSV (and optionally SVG) behind one of the standard figures.
    Figure(figure::FigureArgs),
    /// Estimate a type-II error exponent by Monte Carlo.
    Simulate(simulate::SimulateArgs),
    /// Cross-check the thermal closed form against the numeric pipeline.
    ValidateThermal(validate::ValidateArgs),
}

/// Flags that describe the observed scene. Lengths are in the same units as `--sigma`.
#[derive(Args, Clone, Debug)]
pub struct ScenarioArgs {
    /// Relative brightness of the companion, in [0, 1).
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    /// Star-companion separation.
    #[arg(long, default_value_t = 1.0)]
    pub separation: f64,
    /// PSF width.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Mean photon number per temporal mode (thermal models only).
    #[arg(long, default_value_t = 0.0)]
    pub mean_photons: f64,
    /// Pointing of the optical axis.
    #[arg(long, value_enum, default_value_t = AlignmentArg::CentroidCentered)]
    pub alignment: AlignmentArg,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
pub enum AlignmentArg {
    StarCentered,
    CentroidCentered,
}

impl ScenarioArgs {
    pub fn scenario(&self) -> exodetect::Result<Scenario> {
        let alignment = match self.alignment {
            AlignmentArg::StarCentered => Alignment::StarCentered,
            AlignmentArg::CentroidCentered => Alignment::CentroidCentered,
        };
        Scenario::new(self.epsilon, self.separation, self.sigma, self.mean_photons, alignment)
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::Contract(_) | Error::Domain(_) | Error::MalformedRecord(_) | Error::Unphysical { .. }) => EXIT_USAGE,
        Some(Error::AccuracyFailure { .. } | Error::NonFiniteIntegrand { .. } | Error::ClosedFormDomain(_)) => EXIT_ACCURACY,
        Some(Error::Inconclusive { .. }) => EXIT_INCONCLUSIVE,
        _ if err.chain().any(|e| e.downcast_ref::<output::UsageError>().is_some()) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Entropy(args) => entropy::run(args, cli.json),
        Command::Sweep(args) => sweep::run(args, cli.json),
        Command::Figure(args) => figure::run(args, cli.json),
        Command::Simulate(args) => simulate::run(args),
        Command::ValidateThermal(args) => validate::run(args, cli.json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
