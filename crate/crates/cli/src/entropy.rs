use anyhow::Result;
use clap::{Args, ValueEnum};
use exodetect::classical_imaging::{kl_direct_imaging, kl_direct_imaging_series};
use exodetect::gaussian_thermal::{qre_thermal, qre_thermal_closed};
use exodetect::measurements::{
    sliver_relative_entropy, spade_relative_entropy, spade_thermal_relative_entropy,
    spade_thermal_relative_entropy_per_photon,
};
use exodetect::single_photon::qre_single_closed;
use exodetect::{Error, Scenario};
use serde::Serialize;

use crate::output::{emit, print_json};
use crate::ScenarioArgs;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// Classical KL divergence of direct imaging.
    Di,
    /// Two-term small-ε expansion of the direct-imaging divergence.
    DiSeries,
    /// Single-photon quantum relative entropy.
    Quantum,
    /// Hermite–Gauss mode sorting.
    Spade,
    /// Image-inversion parity measurement.
    Sliver,
    /// Thermal-light quantum relative entropy from the covariance matrices.
    GaussianNumeric,
    /// Thermal-light quantum relative entropy from the closed form.
    GaussianClosed,
    /// Thermal on/off mode sorting.
    SpadeThermal,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Di => "di",
            Quantity::DiSeries => "di-series",
            Quantity::Quantum => "quantum",
            Quantity::Spade => "spade",
            Quantity::Sliver => "sliver",
            Quantity::GaussianNumeric => "gaussian-numeric",
            Quantity::GaussianClosed => "gaussian-closed",
            Quantity::SpadeThermal => "spade-thermal",
        }
    }

    fn is_thermal(self) -> bool {
        matches!(self, Quantity::GaussianNumeric | Quantity::GaussianClosed | Quantity::SpadeThermal)
    }
}

/// A relative entropy and, for thermal light, its value per mean photon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Value {
    pub nats: f64,
    pub per_photon: Option<f64>,
}

pub fn evaluate(quantity: Quantity, scenario: &Scenario) -> exodetect::Result<Value> {
    if quantity.is_thermal() && scenario.mean_photons() <= 0.0 {
        return Err(Error::Contract(format!(
            "{} needs --mean-photons > 0",
            quantity.name()
        )));
    }
    let per_photon = |nats: f64| Value {
        nats,
        per_photon: Some(nats / scenario.mean_photons()),
    };
    let single = |nats: f64| Value { nats, per_photon: None };
    Ok(match quantity {
        Quantity::Di => single(kl_direct_imaging(scenario)?),
        Quantity::DiSeries => single(kl_direct_imaging_series(scenario)),
        Quantity::Quantum => single(qre_single_closed(scenario)),
        Quantity::Spade => single(spade_relative_entropy(scenario)?),
        Quantity::Sliver => single(sliver_relative_entropy(scenario)?),
        Quantity::GaussianNumeric => per_photon(qre_thermal(scenario)?),
        Quantity::GaussianClosed => per_photon(qre_thermal_closed(scenario)?),
        Quantity::SpadeThermal => Value {
            nats: spade_thermal_relative_entropy(scenario)?,
            per_photon: Some(spade_thermal_relative_entropy_per_photon(scenario)?),
        },
    })
}

#[derive(Args)]
pub struct EntropyArgs {
    /// Which relative entropy to evaluate.
    #[arg(long, value_enum)]
    which: Quantity,
    #[command(flatten)]
    scene: ScenarioArgs,
}

#[derive(Serialize)]
struct Report {
    which: Quantity,
    value: f64,
    unit: &'static str,
    per_photon: Option<f64>,
    scenario: Scenario,
}

pub fn run(args: &EntropyArgs, json: bool) -> Result<()> {
    let scenario = args.scene.scenario()?;
    let value = evaluate(args.which, &scenario)?;
    if json {
        return print_json(&Report {
            which: args.which,
            value: value.nats,
            unit: "nats",
            per_photon: value.per_photon,
            scenario,
        });
    }
    let mut text = format!("{}: {:e} nats\n", args.which.name(), value.nats);
    if let Some(p) = value.per_photon {
        text += &format!("per photon: {p:e} nats\n");
    }
    text += &format!("scenario: {scenario}\n");
    emit(&text)
}
