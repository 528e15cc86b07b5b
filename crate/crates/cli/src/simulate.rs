use anyhow::Result;
use clap::{Args, ValueEnum};
use exodetect::hypothesis_sim::{estimate_type2_exponent, tune_n, MeasurementKind, MeasurementModel, MIN_TRIALS};

use crate::output::{print_json, usage};
use crate::ScenarioArgs;

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum MeasurementArg {
    Di,
    Spade,
    Sliver,
}

impl From<MeasurementArg> for MeasurementKind {
    fn from(m: MeasurementArg) -> Self {
        match m {
            MeasurementArg::Di => MeasurementKind::DirectImaging,
            MeasurementArg::Spade => MeasurementKind::Spade,
            MeasurementArg::Sliver => MeasurementKind::Sliver,
        }
    }
}

#[derive(Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    measurement: MeasurementArg,
    /// Photons per record; chosen so the predicted type-II rate is `--target-beta` when absent.
    #[arg(long)]
    n: Option<usize>,
    /// Number of H1 records (at least 1000).
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Type-I budget.
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Predicted type-II rate used to pick `n` automatically.
    #[arg(long, default_value_t = 1e-2)]
    target_beta: f64,
    #[command(flatten)]
    scene: ScenarioArgs,
}

/// Always prints the estimate as JSON.
pub fn run(args: &SimulateArgs) -> Result<()> {
    if args.trials < MIN_TRIALS {
        return Err(usage(format!("--trials must be at least {MIN_TRIALS}, got {}", args.trials)));
    }
    let model = MeasurementModel::new(args.measurement.into(), args.scene.scenario()?)?;
    let n = match args.n {
        Some(n) => n,
        None => tune_n(&model, args.delta, args.target_beta)?,
    };
    let estimate = estimate_type2_exponent(&model, n, args.trials, args.delta, args.seed)?;
    print_json(&estimate)
}
