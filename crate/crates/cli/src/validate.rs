use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use exodetect::gaussian_thermal::{validate_thermal_closed_form, validation_grid, ValidationPoint};

use crate::output::{emit, print_json};

#[derive(Args)]
pub struct ValidateArgs {
    /// Also write the full JSON report to this file.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn describe(p: &ValidationPoint) -> String {
    let value = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.12e}"));
    format!(
        "eps={:.4e} s={:.4} N={} numeric={} closed={} rel_diff={}{}",
        p.scenario.epsilon(),
        p.scenario.separation(),
        p.scenario.mean_photons(),
        value(p.numeric),
        value(p.closed_form),
        value(p.rel_diff),
        p.error.as_ref().map_or(String::new(), |e| format!(" error: {e}")),
    )
}

pub fn run(args: &ValidateArgs, json: bool) -> Result<()> {
    let report = validate_thermal_closed_form(&validation_grid())?;
    if let Some(path) = &args.output {
        let text = serde_json::to_string_pretty(&report).context("cannot serialize report")?;
        fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))?;
    }
    if json {
        return print_json(&report);
    }
    let mut text = format!(
        "{} of {} grid points agree within {:e} relative (max relative difference {:e})\n",
        report.agreeing_points, report.total_points, report.tolerance, report.max_rel_diff
    );
    for p in &report.disagreements {
        text += &format!("disagrees: {}\n", describe(p));
    }
    emit(&text)
}
