//! Interferometric measurements: spatial-mode demultiplexing (SPADE) and
//! image-inversion parity sorting (SLIVER).
//!
//! Both analyses point the instrument at the intensity centroid, so the
//! operations here reject star-centered scenarios.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scene::{Alignment, Scenario};

mod sliver;
mod spade;

pub use sliver::{sliver_distribution, sliver_even_probability, sliver_odd_probability, sliver_relative_entropy};
pub use spade::{
    hermite_gauss_mode_probability, spade_distribution, spade_distribution_h1,
    spade_relative_entropy, spade_thermal_distribution, spade_thermal_relative_entropy,
    spade_thermal_relative_entropy_per_photon, DEFAULT_Q_MAX,
};

/// Allowed deviation of the total probability from one.
pub const NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutcomeLabel {
    /// Photon found in Hermite–Gauss mode `q`.
    Mode(usize),
    /// Mass of all modes above the truncation index.
    Residual,
    Even,
    Odd,
    /// At least one photon in the fundamental mode.
    Click,
    /// Photons detected, but none in the fundamental mode.
    NoClick,
}

impl fmt::Display for OutcomeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutcomeLabel::Mode(q) => write!(f, "q{q}"),
            OutcomeLabel::Residual => f.write_str("residual"),
            OutcomeLabel::Even => f.write_str("even"),
            OutcomeLabel::Odd => f.write_str("odd"),
            OutcomeLabel::Click => f.write_str("click"),
            OutcomeLabel::NoClick => f.write_str("no-click"),
        }
    }
}

/// A labeled probability mass function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeDistribution {
    labels: Vec<OutcomeLabel>,
    probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn new(labels: Vec<OutcomeLabel>, probabilities: Vec<f64>) -> Result<Self> {
        if labels.len() != probabilities.len() || labels.is_empty() {
            return Err(Error::Contract(format!(
                "{} labels for {} probabilities",
                labels.len(),
                probabilities.len()
            )));
        }
        if let Some(p) = probabilities.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
            return Err(Error::Contract(format!("invalid probability {p}")));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Contract(format!("probabilities sum to {total}")));
        }
        Ok(OutcomeDistribution {
            labels,
            probabilities,
        })
    }

    pub fn labels(&self) -> &[OutcomeLabel] {
        &self.labels
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn probability_of(&self, label: OutcomeLabel) -> f64 {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map_or(0.0, |i| self.probabilities[i])
    }

    /// `Σ p ln(p/q)`, `+∞` if `q` misses part of the support of `self`.
    pub fn relative_entropy(&self, other: &OutcomeDistribution) -> Result<f64> {
        if self.labels != other.labels {
            return Err(Error::Contract("distributions have different outcome sets".into()));
        }
        let mut d = 0.0;
        for (&p, &q) in self.probabilities.iter().zip(&other.probabilities) {
            if p == 0.0 {
                continue;
            }
            if q == 0.0 {
                return Ok(f64::INFINITY);
            }
            d += p * (p / q).ln();
        }
        Ok(d.max(0.0))
    }
}

fn require_centroid(scenario: &Scenario, what: &str) -> Result<()> {
    match scenario.alignment() {
        Alignment::CentroidCentered => Ok(()),
        Alignment::StarCentered => Err(Error::Contract(format!(
            "{what} assumes the optical axis on the intensity centroid; got a star-centered scenario"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distribution_validation() {
        let ok = OutcomeDistribution::new(
            vec![OutcomeLabel::Even, OutcomeLabel::Odd],
            vec![0.25, 0.75],
        )
        .unwrap();
        assert_eq!(ok.probability_of(OutcomeLabel::Odd), 0.75);
        assert_eq!(ok.probability_of(OutcomeLabel::Click), 0.0);
        assert!(OutcomeDistribution::new(vec![OutcomeLabel::Even], vec![0.5]).is_err());
        assert!(OutcomeDistribution::new(
            vec![OutcomeLabel::Even, OutcomeLabel::Odd],
            vec![1.5, -0.5]
        )
        .is_err());
    }

    #[test]
    fn discrete_relative_entropy() {
        let p = OutcomeDistribution::new(vec![OutcomeLabel::Even, OutcomeLabel::Odd], vec![1.0, 0.0])
            .unwrap();
        let q = OutcomeDistribution::new(vec![OutcomeLabel::Even, OutcomeLabel::Odd], vec![0.75, 0.25])
            .unwrap();
        assert!((p.relative_entropy(&q).unwrap() - (4.0f64 / 3.0).ln()).abs() < 1e-15);
        assert_eq!(q.relative_entropy(&p).unwrap(), f64::INFINITY);
    }
}
