use rayon::prelude::*;
use serde::Serialize;

use super::{qre_thermal, qre_thermal_closed};
use crate::error::Result;
use crate::scene::{Alignment, Scenario};

/// Relative agreement required between the closed form and the numeric pipeline.
pub const AGREEMENT_RTOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationPoint {
    pub scenario: Scenario,
    pub numeric: Option<f64>,
    pub closed_form: Option<f64>,
    pub abs_diff: Option<f64>,
    pub rel_diff: Option<f64>,
    /// Why one of the two evaluations failed, if it did.
    pub error: Option<String>,
}

impl ValidationPoint {
    pub fn agrees(&self) -> bool {
        self.rel_diff.is_some_and(|r| r <= AGREEMENT_RTOL)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub tolerance: f64,
    pub total_points: usize,
    pub agreeing_points: usize,
    pub max_rel_diff: f64,
    pub points: Vec<ValidationPoint>,
    /// Every point that fails the tolerance or could not be evaluated.
    pub disagreements: Vec<ValidationPoint>,
}

fn spaced(from: f64, to: f64, points: usize, log: bool) -> Vec<f64> {
    (0..points)
        .map(|i| {
            let f = i as f64 / (points - 1) as f64;
            if log {
                (from.ln() + f * (to.ln() - from.ln())).exp()
            } else {
                from + f * (to - from)
            }
        })
        .collect()
}

/// 20 log-spaced ε in [10⁻³, 0.3] × 20 linear s/σ in [0.1, 4] × N ∈ {0.05, 0.5, 5}.
pub fn validation_grid() -> Vec<Scenario> {
    let mut grid = Vec::with_capacity(1200);
    for &n in &[0.05, 0.5, 5.0] {
        for &eps in &spaced(1e-3, 0.3, 20, true) {
            for &s in &spaced(0.1, 4.0, 20, false) {
                grid.push(
                    Scenario::new(eps, s, 1.0, n, Alignment::CentroidCentered)
                        .expect("grid values are in range"),
                );
            }
        }
    }
    grid
}

/// Evaluates the closed form against the covariance-matrix pipeline at every
/// grid point.
pub fn validate_thermal_closed_form(grid: &[Scenario]) -> Result<ValidationReport> {
    let points: Vec<ValidationPoint> = grid
        .par_iter()
        .map(|sc| {
            let numeric = qre_thermal(sc);
            let closed = qre_thermal_closed(sc);
            let error = match (&numeric, &closed) {
                (Err(e), _) => Some(format!("numeric: {e}")),
                (_, Err(e)) => Some(format!("closed form: {e}")),
                _ => None,
            };
            let (numeric, closed_form) = (numeric.ok(), closed.ok());
            let abs_diff = numeric.zip(closed_form).map(|(a, b)| (a - b).abs());
            let rel_diff = numeric
                .zip(abs_diff)
                .map(|(a, d)| if a == 0.0 { d } else { d / a.abs() });
            ValidationPoint {
                scenario: *sc,
                numeric,
                closed_form,
                abs_diff,
                rel_diff,
                error,
            }
        })
        .collect();
    let disagreements: Vec<ValidationPoint> =
        points.iter().filter(|p| !p.agrees()).cloned().collect();
    let max_rel_diff = points
        .iter()
        .filter_map(|p| p.rel_diff)
        .fold(0.0, f64::max);
    Ok(ValidationReport {
        tolerance: AGREEMENT_RTOL,
        total_points: points.len(),
        agreeing_points: points.len() - disagreements.len(),
        max_rel_diff,
        points,
        disagreements,
    })
}
