use std::fmt;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::classical_imaging::{kl_direct_imaging, kl_direct_imaging_variance, log_intensity_ratio};
use crate::error::{Error, Result};
use crate::measurements::{sliver_distribution, spade_distribution, DEFAULT_Q_MAX};
use crate::scene::{Hypothesis, Scenario};

/// Samples drawn per hypothesis by the goodness-of-fit self-check.
const SELF_CHECK_SAMPLES: usize = 100_000;
const SELF_CHECK_MIN_P: f64 = 1e-6;
const SELF_CHECK_SEED: u64 = 0x5e1f_c43c;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasurementKind {
    #[serde(rename = "di")]
    DirectImaging,
    #[serde(rename = "spade")]
    Spade,
    #[serde(rename = "sliver")]
    Sliver,
}

impl fmt::Display for MeasurementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasurementKind::DirectImaging => "di",
            MeasurementKind::Spade => "spade",
            MeasurementKind::Sliver => "sliver",
        })
    }
}

/// One detected photon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    /// Screen coordinate, measured from the star.
    Position(f64),
    /// Index into the model's discrete outcome list.
    Index(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    AcceptH0,
    RejectH0,
}

#[derive(Debug, Clone)]
enum Likelihoods {
    Positions,
    Discrete {
        p0: Vec<f64>,
        p1: Vec<f64>,
        sampler0: WeightedIndex<f64>,
        sampler1: WeightedIndex<f64>,
    },
}

/// A measurement applied photon by photon, with its sampler and likelihoods.
///
/// Direct imaging measures positions from the star whatever the pointing;
/// SPADE and SLIVER require centroid pointing.
#[derive(Debug, Clone)]
pub struct MeasurementModel {
    kind: MeasurementKind,
    scenario: Scenario,
    likelihoods: Likelihoods,
}

impl MeasurementModel {
    /// Builds the model and verifies its sampler against its likelihoods.
    pub fn new(kind: MeasurementKind, scenario: Scenario) -> Result<Self> {
        let likelihoods = match kind {
            MeasurementKind::DirectImaging => Likelihoods::Positions,
            MeasurementKind::Spade => {
                let p0 = spade_distribution(&scenario, Hypothesis::H0, DEFAULT_Q_MAX)?;
                let p1 = spade_distribution(&scenario, Hypothesis::H1, DEFAULT_Q_MAX)?;
                discrete(p0.probabilities().to_vec(), p1.probabilities().to_vec())?
            }
            MeasurementKind::Sliver => {
                let p0 = sliver_distribution(&scenario, Hypothesis::H0)?;
                let p1 = sliver_distribution(&scenario, Hypothesis::H1)?;
                discrete(p0.probabilities().to_vec(), p1.probabilities().to_vec())?
            }
        };
        let model = MeasurementModel {
            kind,
            scenario,
            likelihoods,
        };
        model.self_check()?;
        Ok(model)
    }

    pub fn kind(&self) -> MeasurementKind {
        self.kind
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    /// Draws one outcome.
    pub fn draw<R: Rng + ?Sized>(&self, hypothesis: Hypothesis, rng: &mut R) -> Outcome {
        match &self.likelihoods {
            Likelihoods::Positions => {
                let z: f64 = rng.sample(StandardNormal);
                let from_planet = hypothesis == Hypothesis::H1
                    && rng.gen::<f64>() < self.scenario.epsilon();
                let center = if from_planet { self.scenario.separation() } else { 0.0 };
                Outcome::Position(center + self.scenario.sigma() * z)
            }
            Likelihoods::Discrete {
                sampler0, sampler1, ..
            } => Outcome::Index(match hypothesis {
                Hypothesis::H0 => sampler0.sample(rng),
                Hypothesis::H1 => sampler1.sample(rng),
            }),
        }
    }

    /// `ln(p₁/p₀)` of one outcome; `+∞` for outcomes impossible under H0.
    pub fn log_likelihood_ratio(&self, outcome: Outcome) -> Result<f64> {
        match (&self.likelihoods, outcome) {
            (Likelihoods::Positions, Outcome::Position(x)) if x.is_finite() => {
                Ok(log_intensity_ratio(&self.scenario, x))
            }
            (Likelihoods::Discrete { p0, p1, .. }, Outcome::Index(i)) if i < p0.len() => {
                match (p0[i], p1[i]) {
                    (a, b) if a == 0.0 && b == 0.0 => Err(Error::MalformedRecord(format!(
                        "outcome {i} is impossible under both hypotheses"
                    ))),
                    (a, _) if a == 0.0 => Ok(f64::INFINITY),
                    (_, b) if b == 0.0 => Ok(f64::NEG_INFINITY),
                    (a, b) => Ok((b / a).ln()),
                }
            }
            (_, other) => Err(Error::MalformedRecord(format!(
                "outcome {other:?} does not belong to a {} model",
                self.kind
            ))),
        }
    }

    /// Log-likelihood ratio of a whole record.
    pub fn record_log_likelihood_ratio(&self, record: &[Outcome]) -> Result<f64> {
        let mut total = 0.0;
        for &o in record {
            total += self.log_likelihood_ratio(o)?;
        }
        if total.is_nan() {
            return Err(Error::MalformedRecord(
                "record contains outcomes impossible under each hypothesis separately".into(),
            ));
        }
        Ok(total)
    }

    /// Relative entropy `D(p₀‖p₁)` of one outcome.
    pub fn relative_entropy(&self) -> Result<f64> {
        match &self.likelihoods {
            Likelihoods::Positions => kl_direct_imaging(&self.scenario),
            Likelihoods::Discrete { p0, p1, .. } => Ok(discrete_moments(p0, p1)?.0),
        }
    }

    /// `Var_{p₀}[ln(p₀/p₁)]`.
    pub fn llr_variance(&self) -> Result<f64> {
        match &self.likelihoods {
            Likelihoods::Positions => kl_direct_imaging_variance(&self.scenario),
            Likelihoods::Discrete { p0, p1, .. } => Ok(discrete_moments(p0, p1)?.1),
        }
    }

    /// Chi-square goodness of fit of the sampler against the model's own
    /// distribution, under both hypotheses.
    pub fn self_check(&self) -> Result<()> {
        for (phase, hypothesis) in [Hypothesis::H0, Hypothesis::H1].into_iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(SELF_CHECK_SEED);
            rng.set_stream(phase as u64);
            let (observed, expected) = match &self.likelihoods {
                Likelihoods::Positions => self.binned_positions(hypothesis, &mut rng),
                Likelihoods::Discrete { p0, p1, .. } => {
                    let p = if hypothesis == Hypothesis::H0 { p0 } else { p1 };
                    let mut counts = vec![0.0; p.len()];
                    for _ in 0..SELF_CHECK_SAMPLES {
                        if let Outcome::Index(i) = self.draw(hypothesis, &mut rng) {
                            counts[i] += 1.0;
                        }
                    }
                    let expected = p.iter().map(|q| q * SELF_CHECK_SAMPLES as f64).collect();
                    (counts, expected)
                }
            };
            let p_value = chi_square_p_value(&observed, &expected)?;
            if p_value < SELF_CHECK_MIN_P {
                return Err(Error::Contract(format!(
                    "{} sampler disagrees with its likelihood under {hypothesis:?} (p = {p_value:e})",
                    self.kind
                )));
            }
        }
        Ok(())
    }

    fn binned_positions(&self, hypothesis: Hypothesis, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
        let sigma = self.scenario.sigma();
        let s = self.scenario.separation();
        let eps = match hypothesis {
            Hypothesis::H0 => 0.0,
            Hypothesis::H1 => self.scenario.epsilon(),
        };
        let unit = Normal::new(0.0, 1.0).expect("standard normal");
        let cdf = |x: f64| (1.0 - eps) * unit.cdf(x / sigma) + eps * unit.cdf((x - s) / sigma);
        // Interior edges at the H0 twentieths.
        let edges: Vec<f64> = (1..20)
            .map(|i| sigma * unit.inverse_cdf(i as f64 / 20.0))
            .collect();
        let mut counts = vec![0.0; edges.len() + 1];
        for _ in 0..SELF_CHECK_SAMPLES {
            if let Outcome::Position(x) = self.draw(hypothesis, rng) {
                counts[edges.partition_point(|&e| e < x)] += 1.0;
            }
        }
        let mut expected = Vec::with_capacity(counts.len());
        let mut below = 0.0;
        for &e in &edges {
            let c = cdf(e);
            expected.push((c - below) * SELF_CHECK_SAMPLES as f64);
            below = c;
        }
        expected.push((1.0 - below) * SELF_CHECK_SAMPLES as f64);
        (counts, expected)
    }
}

fn discrete(p0: Vec<f64>, p1: Vec<f64>) -> Result<Likelihoods> {
    let sampler0 = WeightedIndex::new(&p0).map_err(|e| Error::Contract(e.to_string()))?;
    let sampler1 = WeightedIndex::new(&p1).map_err(|e| Error::Contract(e.to_string()))?;
    Ok(Likelihoods::Discrete {
        p0,
        p1,
        sampler0,
        sampler1,
    })
}

/// Mean and variance of `ln(p₀/p₁)` under `p₀`.
fn discrete_moments(p0: &[f64], p1: &[f64]) -> Result<(f64, f64)> {
    let (mut m1, mut m2) = (0.0, 0.0);
    for (&a, &b) in p0.iter().zip(p1) {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            return Err(Error::Divergence("H1 misses part of the H0 support".into()));
        }
        let l = (a / b).ln();
        m1 += a * l;
        m2 += a * l * l;
    }
    Ok((m1.max(0.0), (m2 - m1 * m1).max(0.0)))
}

/// Pearson chi-square test, pooling cells expected to hold fewer than 5 counts.
fn chi_square_p_value(observed: &[f64], expected: &[f64]) -> Result<f64> {
    let (mut stat, mut cells) = (0.0, 0usize);
    let (mut pooled_obs, mut pooled_exp) = (0.0, 0.0);
    for (&o, &e) in observed.iter().zip(expected) {
        if e >= 5.0 {
            stat += (o - e).powi(2) / e;
            cells += 1;
        } else {
            pooled_obs += o;
            pooled_exp += e;
        }
    }
    if pooled_exp >= 1.0 {
        stat += (pooled_obs - pooled_exp).powi(2) / pooled_exp;
        cells += 1;
    } else if pooled_obs > 5.0 {
        // Outcomes the model says are essentially impossible keep turning up.
        return Ok(0.0);
    }
    if cells < 2 {
        return Ok(1.0);
    }
    let dist = ChiSquared::new((cells - 1) as f64).map_err(|e| Error::Contract(e.to_string()))?;
    Ok(1.0 - dist.cdf(stat))
}

/// `n` i.i.d. outcomes under `hypothesis`, reproducible from `seed`.
pub fn sample_record(model: &MeasurementModel, hypothesis: Hypothesis, n: usize, seed: u64) -> Vec<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(match hypothesis {
        Hypothesis::H0 => u64::MAX - 1,
        Hypothesis::H1 => u64::MAX,
    });
    (0..n).map(|_| model.draw(hypothesis, &mut rng)).collect()
}

/// Rejects H0 iff the record's log-likelihood ratio exceeds `threshold`.
pub fn neyman_pearson_test(record: &[Outcome], model: &MeasurementModel, threshold: f64) -> Result<Decision> {
    let llr = model.record_log_likelihood_ratio(record)?;
    Ok(if llr > threshold {
        Decision::RejectH0
    } else {
        Decision::AcceptH0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::Alignment;

    fn model(kind: MeasurementKind, eps: f64, s: f64) -> MeasurementModel {
        MeasurementModel::new(kind, Scenario::unit(eps, s).unwrap()).unwrap()
    }

    #[test]
    fn di_samples() {
        let m = model(MeasurementKind::DirectImaging, 0.3, 2.0);
        let n = 4000;
        let rec = sample_record(&m, Hypothesis::H0, n, 11);
        let mean: f64 = rec
            .iter()
            .map(|o| match o {
                Outcome::Position(x) => *x,
                _ => unreachable!(),
            })
            .sum::<f64>()
            / n as f64;
        assert!(mean.abs() < 4.0 / (n as f64).sqrt());
        assert_eq!(rec, sample_record(&m, Hypothesis::H0, n, 11));
        assert_ne!(rec, sample_record(&m, Hypothesis::H0, n, 12));

        let m = model(MeasurementKind::DirectImaging, 0.5, 4.0);
        let rec = sample_record(&m, Hypothesis::H1, n, 3);
        let near_planet = rec
            .iter()
            .filter(|o| matches!(o, Outcome::Position(x) if *x > 2.0))
            .count() as f64
            / n as f64;
        assert!((near_planet - 0.5).abs() < 3.0 / (n as f64).sqrt());
    }

    #[test]
    fn spade_h0_is_fundamental_mode() {
        let m = model(MeasurementKind::Spade, 0.3, 2.0);
        let rec = sample_record(&m, Hypothesis::H0, 1000, 5);
        assert!(rec.iter().all(|o| *o == Outcome::Index(0)));
    }

    #[test]
    fn test_decisions() {
        let same = model(MeasurementKind::DirectImaging, 0.0, 2.0);
        let rec = sample_record(&same, Hypothesis::H1, 50, 1);
        // Identical hypotheses: the ratio is exactly 0 and never exceeds 0.
        assert_eq!(neyman_pearson_test(&rec, &same, 0.0).unwrap(), Decision::AcceptH0);
        let m = model(MeasurementKind::Spade, 0.3, 2.0);
        let rec = vec![Outcome::Index(0), Outcome::Index(3)];
        assert_eq!(neyman_pearson_test(&rec, &m, 1e300).unwrap(), Decision::RejectH0);
        assert_eq!(neyman_pearson_test(&rec, &m, f64::INFINITY).unwrap(), Decision::AcceptH0);
        assert!(matches!(
            neyman_pearson_test(&[Outcome::Position(0.1)], &m, 0.0),
            Err(Error::MalformedRecord(_))
        ));
    }

    #[test]
    fn impossible_outcome_is_malformed() {
        // Residual bucket of SPADE with no separation: impossible under both.
        let m = model(MeasurementKind::Spade, 0.3, 0.0);
        let last = DEFAULT_Q_MAX + 1;
        assert!(matches!(
            m.log_likelihood_ratio(Outcome::Index(last)),
            Err(Error::MalformedRecord(_))
        ));
    }

    #[test]
    fn model_entropies_match_modules() {
        let sc = Scenario::unit(0.3, 2.0).unwrap();
        let spade = MeasurementModel::new(MeasurementKind::Spade, sc).unwrap();
        let d = crate::measurements::spade_relative_entropy(&sc).unwrap();
        assert!((spade.relative_entropy().unwrap() - d).abs() < 1e-12 * d);
        assert_eq!(spade.llr_variance().unwrap(), 0.0);
        let sliver = MeasurementModel::new(MeasurementKind::Sliver, sc).unwrap();
        let d = crate::measurements::sliver_relative_entropy(&sc).unwrap();
        assert!((sliver.relative_entropy().unwrap() - d).abs() < 1e-12 * d);
    }

    #[test]
    fn centroid_only_for_interferometric() {
        let star = Scenario::new(0.3, 2.0, 1.0, 0.0, Alignment::StarCentered).unwrap();
        assert!(MeasurementModel::new(MeasurementKind::Spade, star).is_err());
        assert!(MeasurementModel::new(MeasurementKind::DirectImaging, star).is_ok());
    }

    #[test]
    fn chi_square_detects_mismatch() {
        let obs = [500.0, 500.0];
        assert!(chi_square_p_value(&obs, &[500.0, 500.0]).unwrap() > 0.9);
        assert!(chi_square_p_value(&obs, &[600.0, 400.0]).unwrap() < 1e-6);
    }
}
