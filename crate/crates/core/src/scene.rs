//! Source geometry and the point-spread function.
//!
//! A bright star sits at the origin and a faint companion at distance `s`; both
//! are imaged through the same Gaussian PSF of width `σ`. Every formula in the
//! crate depends only on relative positions and on `s/σ`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Where the optical axis points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alignment {
    /// Axis on the star (direct-imaging convention).
    StarCentered,
    /// Axis on the intensity centroid `εs` (mode-sorting convention).
    CentroidCentered,
}

impl fmt::Display for Alignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Alignment::StarCentered => "star-centered",
            Alignment::CentroidCentered => "centroid-centered",
        })
    }
}

/// H0: the star alone. H1: star plus companion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    H0,
    H1,
}

/// A validated observing configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScenarioRecord", into = "ScenarioRecord")]
pub struct Scenario {
    epsilon: f64,
    separation: f64,
    sigma: f64,
    mean_photons: f64,
    alignment: Alignment,
}

/// Flat key-value form of a [`Scenario`], as read from flags or JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioRecord {
    pub epsilon: f64,
    pub separation: f64,
    pub sigma: f64,
    pub mean_photons: f64,
    pub alignment: Alignment,
}

impl TryFrom<ScenarioRecord> for Scenario {
    type Error = Error;

    fn try_from(r: ScenarioRecord) -> Result<Self> {
        Scenario::new(r.epsilon, r.separation, r.sigma, r.mean_photons, r.alignment)
            .map_err(|e| Error::MalformedRecord(e.to_string()))
    }
}

impl From<Scenario> for ScenarioRecord {
    fn from(s: Scenario) -> Self {
        ScenarioRecord {
            epsilon: s.epsilon,
            separation: s.separation,
            sigma: s.sigma,
            mean_photons: s.mean_photons,
            alignment: s.alignment,
        }
    }
}

impl Scenario {
    pub fn new(
        epsilon: f64,
        separation: f64,
        sigma: f64,
        mean_photons: f64,
        alignment: Alignment,
    ) -> Result<Self> {
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::Domain(format!("epsilon must lie in [0, 1), got {epsilon}")));
        }
        if !(separation >= 0.0 && separation.is_finite()) {
            return Err(Error::Domain(format!(
                "separation must be finite and nonnegative, got {separation}"
            )));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
        }
        if !(mean_photons >= 0.0 && mean_photons.is_finite()) {
            return Err(Error::Domain(format!(
                "mean photon number must be finite and nonnegative, got {mean_photons}"
            )));
        }
        Ok(Scenario {
            epsilon,
            separation,
            sigma,
            mean_photons,
            alignment,
        })
    }

    /// Single-photon scenario with `σ = 1`, centroid pointing and no thermal photons.
    pub fn unit(epsilon: f64, separation: f64) -> Result<Self> {
        Scenario::new(epsilon, separation, 1.0, 0.0, Alignment::CentroidCentered)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn mean_photons(&self) -> f64 {
        self.mean_photons
    }

    pub fn alignment(&self) -> Alignment {
        self.alignment
    }

    /// Separation in PSF widths.
    pub fn separation_ratio(&self) -> f64 {
        self.separation / self.sigma
    }

    pub fn with_epsilon(self, epsilon: f64) -> Result<Self> {
        Scenario::new(epsilon, self.separation, self.sigma, self.mean_photons, self.alignment)
    }

    pub fn with_separation(self, separation: f64) -> Result<Self> {
        Scenario::new(self.epsilon, separation, self.sigma, self.mean_photons, self.alignment)
    }

    pub fn with_mean_photons(self, mean_photons: f64) -> Result<Self> {
        Scenario::new(self.epsilon, self.separation, self.sigma, mean_photons, self.alignment)
    }

    pub fn with_alignment(self, alignment: Alignment) -> Self {
        Scenario { alignment, ..self }
    }

    pub fn psf(&self) -> GaussianPsf {
        GaussianPsf { sigma: self.sigma }
    }

    /// `ω = ⟨ψ_star|ψ_planet⟩`.
    pub fn overlap(&self) -> f64 {
        overlap_omega(self.separation, self.sigma)
    }

    /// `1 − ω²`, evaluated without cancellation at small separation.
    pub fn overlap_deficit(&self) -> f64 {
        overlap_deficit(self.separation, self.sigma)
    }

    /// Star position relative to the optical axis.
    pub fn star_offset(&self) -> f64 {
        match self.alignment {
            Alignment::StarCentered => 0.0,
            Alignment::CentroidCentered => -self.epsilon * self.separation,
        }
    }

    /// Companion position relative to the optical axis.
    pub fn planet_offset(&self) -> f64 {
        match self.alignment {
            Alignment::StarCentered => self.separation,
            Alignment::CentroidCentered => (1.0 - self.epsilon) * self.separation,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "epsilon={} separation={} sigma={} mean_photons={} alignment={}",
            self.epsilon, self.separation, self.sigma, self.mean_photons, self.alignment
        )
    }
}

/// Gaussian amplitude PSF, L²-normalized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPsf {
    sigma: f64,
}

impl GaussianPsf {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
        }
        Ok(GaussianPsf { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// `ψ(x) = (2πσ²)^{-1/4} exp(−x²/4σ²)`.
pub fn psf_amplitude(psf: &GaussianPsf, x: f64) -> f64 {
    let s2 = psf.sigma * psf.sigma;
    (2.0 * std::f64::consts::PI * s2).powf(-0.25) * (-x * x / (4.0 * s2)).exp()
}

/// Overlap `∫ψ(x)ψ(x+shift)dx = exp(−shift²/8σ²)`.
pub fn overlap_omega(shift: f64, sigma: f64) -> f64 {
    debug_assert!(sigma > 0.0);
    (-shift * shift / (8.0 * sigma * sigma)).exp()
}

/// `1 − ω(shift)² = 1 − exp(−shift²/4σ²)`.
pub fn overlap_deficit(shift: f64, sigma: f64) -> f64 {
    -(-shift * shift / (4.0 * sigma * sigma)).exp_m1()
}

/// Intensity centroid `(1−ε)·0 + ε·s`, with the star at the origin.
pub fn centroid(scenario: &Scenario) -> f64 {
    scenario.epsilon * scenario.separation
}
