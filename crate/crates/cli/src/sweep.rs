use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, ValueEnum};
use exodetect::Scenario;
use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{evaluate, Quantity};
use crate::output::{print_json, scenario_metadata, spaced, usage, Table};
use crate::ScenarioArgs;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    Epsilon,
    Separation,
    MeanPhotons,
}

impl Parameter {
    fn column(self) -> &'static str {
        match self {
            Parameter::Epsilon => "epsilon",
            Parameter::Separation => "separation",
            Parameter::MeanPhotons => "mean_photons",
        }
    }

    fn apply(self, base: Scenario, value: f64) -> exodetect::Result<Scenario> {
        match self {
            Parameter::Epsilon => base.with_epsilon(value),
            Parameter::Separation => base.with_separation(value),
            Parameter::MeanPhotons => base.with_mean_photons(value),
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

/// One swept parameter over a range, all other scenario fields fixed.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepSpec {
    pub parameter: Parameter,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub scale: Scale,
    pub fixed: Scenario,
}

impl SweepSpec {
    pub fn new(parameter: Parameter, from: f64, to: f64, points: usize, scale: Scale, fixed: Scenario) -> Result<Self> {
        if !(from < to) {
            return Err(usage(format!("sweep needs --from < --to, got {from} and {to}")));
        }
        if points < 2 {
            return Err(usage(format!("sweep needs at least 2 points, got {points}")));
        }
        if scale == Scale::Log && from <= 0.0 {
            return Err(usage(format!("a log sweep needs --from > 0, got {from}")));
        }
        Ok(SweepSpec {
            parameter,
            from,
            to,
            points,
            scale,
            fixed,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        spaced(self.from, self.to, self.points, self.scale == Scale::Log)
    }

    /// Evaluates every quantity at every sweep value; rows come back in sweep order.
    pub fn evaluate(&self, quantities: &[Quantity]) -> Result<Table> {
        let rows = self
            .values()
            .into_par_iter()
            .map(|x| {
                let scenario = self.parameter.apply(self.fixed, x)?;
                let mut row = vec![x];
                for &q in quantities {
                    row.push(evaluate(q, &scenario)?.nats);
                }
                Ok(row)
            })
            .collect::<exodetect::Result<Vec<_>>>()?;
        let mut metadata = vec![
            ("command".to_string(), "sweep".to_string()),
            ("swept".to_string(), self.parameter.column().to_string()),
            ("range".to_string(), format!("{} to {} ({} points, {:?})", self.from, self.to, self.points, self.scale).to_lowercase()),
        ];
        metadata.extend(
            scenario_metadata(&self.fixed)
                .into_iter()
                .filter(|(k, _)| k != self.parameter.column()),
        );
        let mut columns = vec![self.parameter.column().to_string()];
        columns.extend(quantities.iter().map(|q| q.name().to_string()));
        Ok(Table { metadata, columns, rows })
    }
}

#[derive(Args)]
pub struct SweepArgs {
    /// Scenario field to vary.
    #[arg(long, value_enum)]
    param: Parameter,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long, default_value_t = 21)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Scale::Linear)]
    scale: Scale,
    /// Comma-separated quantities, one CSV column each.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Quantity::Quantum, Quantity::Di])]
    which: Vec<Quantity>,
    /// CSV destination; stdout when absent and `--json` is not given.
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    scene: ScenarioArgs,
}

#[derive(Serialize)]
struct Report<'a> {
    sweep: &'a SweepSpec,
    columns: &'a [String],
    rows: &'a [Vec<f64>],
}

pub fn run(args: &SweepArgs, json: bool) -> Result<()> {
    let spec = SweepSpec::new(args.param, args.from, args.to, args.points, args.scale, args.scene.scenario()?)?;
    let table = spec.evaluate(&args.which)?;
    if let Some(path) = &args.output {
        table.write_to(Some(path))?;
    }
    if json {
        print_json(&Report {
            sweep: &spec,
            columns: &table.columns,
            rows: &table.rows,
        })
    } else if args.output.is_none() {
        table.write_to(None)
    } else {
        Ok(())
    }
}
