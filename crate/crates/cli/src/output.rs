use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use exodetect::Scenario;

/// A flag combination the parser accepted but the command cannot honor.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(message: impl Into<String>) -> anyhow::Error {
    UsageError(message.into()).into()
}

/// Writes to the file at `path`, or to stdout when no path is given.
pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

/// Key-value echo of every scenario field, for CSV headers.
pub fn scenario_metadata(scenario: &Scenario) -> Vec<(String, String)> {
    vec![
        ("epsilon".into(), scenario.epsilon().to_string()),
        ("separation".into(), scenario.separation().to_string()),
        ("sigma".into(), scenario.sigma().to_string()),
        ("mean_photons".into(), scenario.mean_photons().to_string()),
        ("alignment".into(), scenario.alignment().to_string()),
    ]
}

/// A CSV table preceded by `# key: value` metadata lines.
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn write_to(&self, path: Option<&Path>) -> Result<()> {
        let describe = || path.map_or("stdout".to_string(), |p| p.display().to_string());
        let mut out = open(path)?;
        for (key, value) in &self.metadata {
            writeln!(out, "# {key}: {value}").with_context(|| format!("cannot write {}", describe()))?;
        }
        let mut csv = csv::Writer::from_writer(out);
        csv.write_record(&self.columns)
            .with_context(|| format!("cannot write {}", describe()))?;
        for row in &self.rows {
            csv.write_record(row.iter().map(|v| v.to_string()))
                .with_context(|| format!("cannot write {}", describe()))?;
        }
        csv.flush().with_context(|| format!("cannot write {}", describe()))?;
        Ok(())
    }

    pub fn column(&self, name: &str) -> Vec<f64> {
        let i = self.columns.iter().position(|c| c == name).expect("known column");
        self.rows.iter().map(|r| r[i]).collect()
    }
}

/// Evenly spaced points on a linear or logarithmic axis, both ends included.
pub fn spaced(from: f64, to: f64, points: usize, log: bool) -> Vec<f64> {
    (0..points)
        .map(|i| {
            let f = i as f64 / (points - 1) as f64;
            if i == 0 {
                from
            } else if i + 1 == points {
                to
            } else if log {
                (from.ln() + f * (to.ln() - from.ln())).exp()
            } else {
                from + f * (to - from)
            }
        })
        .collect()
}

pub fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).context("cannot serialize JSON")?;
    emit(&(text + "\n"))
}

/// Prints plain-text output; a closed pipe downstream ends output quietly.
pub fn emit(text: &str) -> Result<()> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => other.context("cannot write to stdout"),
    }
}
