use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::model::{MeasurementKind, MeasurementModel};
use crate::error::{Error, Result};
use crate::scene::{Hypothesis, Scenario};

pub const MIN_TRIALS: usize = 1_000;
/// The H0 calibration set never holds fewer records than this.
pub const MIN_CALIBRATION_RECORDS: usize = 10_000;
/// Allowed window for the predicted type-II rate at the chosen `n`.
const PREDICTED_BETA_MIN: f64 = 1e-3;
const PREDICTED_BETA_MAX: f64 = 0.3;
const CONFIDENCE: f64 = 0.95;

const CALIBRATION_PHASE: u64 = 0;
const TEST_PHASE: u64 = 1;

/// Empirical type-II exponent with its 95% interval and the analytic prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentEstimate {
    pub measurement: MeasurementKind,
    pub scenario: Scenario,
    pub n: usize,
    pub trials: usize,
    pub delta: f64,
    pub seed: u64,
    /// Type-I rate achieved on the calibration records.
    pub alpha_hat: f64,
    pub beta_hat: f64,
    /// Wilson score interval.
    pub beta_ci: [f64; 2],
    pub exponent_hat: f64,
    pub exponent_ci: [f64; 2],
    pub predicted_first_order: f64,
    /// `D + √(b/n) Φ⁻¹(δ)` with `b = Var_{p₀}[ln(p₀/p₁)]`.
    pub predicted_second_order: f64,
}

/// `(D, D + √(b/n)Φ⁻¹(δ))` for the model at `n` photons.
pub fn predicted_exponent(model: &MeasurementModel, n: usize, delta: f64) -> Result<(f64, f64)> {
    let d = model.relative_entropy()?;
    let b = model.llr_variance()?;
    Ok((d, d + (b / n as f64).sqrt() * normal_quantile(delta)))
}

fn normal_quantile(p: f64) -> f64 {
    Normal::new(0.0, 1.0).expect("standard normal").inverse_cdf(p)
}

/// Smallest `n` whose second-order predicted type-II rate is at most `target_beta`.
pub fn tune_n(model: &MeasurementModel, delta: f64, target_beta: f64) -> Result<usize> {
    if !(target_beta > 0.0 && target_beta < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Contract(format!(
            "need 0 < delta, target_beta < 1; got {delta}, {target_beta}"
        )));
    }
    let d = model.relative_entropy()?;
    if d <= 0.0 {
        return Err(Error::Domain("hypotheses are indistinguishable; no n reaches the target".into()));
    }
    let b = model.llr_variance()?;
    // n·D + √(n·b)·Φ⁻¹(δ) = −ln β, a quadratic in √n.
    let c = b.sqrt() * normal_quantile(delta);
    let l = -target_beta.ln();
    let root = (-c + (c * c + 4.0 * d * l).sqrt()) / (2.0 * d);
    let mut n = (root * root).floor().max(1.0) as usize;
    while n as f64 * d + (n as f64 * b).sqrt() * normal_quantile(delta) < l {
        n += 1;
    }
    Ok(n)
}

fn trial_rng(seed: u64, phase: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((phase << 40) | trial);
    rng
}

fn record_llrs(
    model: &MeasurementModel,
    hypothesis: Hypothesis,
    n: usize,
    records: usize,
    seed: u64,
    phase: u64,
) -> Result<Vec<f64>> {
    (0..records as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, phase, trial);
            let mut total = 0.0;
            for _ in 0..n {
                total += model.log_likelihood_ratio(model.draw(hypothesis, &mut rng))?;
            }
            if total.is_nan() {
                return Err(Error::MalformedRecord("record log-likelihood ratio is NaN".into()));
            }
            Ok(total)
        })
        .collect()
}

/// Wilson score interval for `k` successes in `m` trials.
fn wilson(k: usize, m: usize, z: f64) -> [f64; 2] {
    let (k, m) = (k as f64, m as f64);
    let p = k / m;
    let z2 = z * z;
    let denom = 1.0 + z2 / m;
    let center = (p + z2 / (2.0 * m)) / denom;
    let half = z / denom * (p * (1.0 - p) / m + z2 / (4.0 * m * m)).sqrt();
    let lower = if k == 0.0 { 0.0 } else { (center - half).max(0.0) };
    let upper = if k == m { 1.0 } else { (center + half).min(1.0) };
    [lower, upper]
}

/// Calibrates a likelihood-ratio test on H0 records to type-I rate at most
/// `delta`, then measures its type-II rate on `trials` fresh H1 records of `n`
/// photons each.
///
/// Every trial draws from its own ChaCha8 stream derived from `(seed, phase,
/// trial)`, so the result does not depend on the number of worker threads.
pub fn estimate_type2_exponent(
    model: &MeasurementModel,
    n: usize,
    trials: usize,
    delta: f64,
    seed: u64,
) -> Result<ExponentEstimate> {
    if trials < MIN_TRIALS {
        return Err(Error::Contract(format!("need at least {MIN_TRIALS} trials, got {trials}")));
    }
    if n == 0 {
        return Err(Error::Contract("need at least one photon per record".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Contract(format!("type-I budget must lie in (0, 1), got {delta}")));
    }
    let (first, second) = predicted_exponent(model, n, delta)?;
    let predicted_beta = (-(n as f64) * second).exp();
    if predicted_beta < PREDICTED_BETA_MIN || (first > 0.0 && predicted_beta > PREDICTED_BETA_MAX) {
        return Err(Error::Contract(format!(
            "predicted type-II rate {predicted_beta:e} at n = {n} is outside [{PREDICTED_BETA_MIN}, {PREDICTED_BETA_MAX}]; the estimate would be vacuous"
        )));
    }

    let calibration = trials.max(MIN_CALIBRATION_RECORDS);
    let mut h0 = record_llrs(model, Hypothesis::H0, n, calibration, seed, CALIBRATION_PHASE)?;
    h0.sort_by(f64::total_cmp);
    let allowed = (delta * calibration as f64).floor() as usize;
    let threshold = h0[calibration - allowed - 1];
    let alpha_hat = h0.iter().filter(|&&l| l > threshold).count() as f64 / calibration as f64;

    let h1 = record_llrs(model, Hypothesis::H1, n, trials, seed, TEST_PHASE)?;
    let misses = h1.iter().filter(|&&l| l <= threshold).count();
    let z = normal_quantile(0.5 + CONFIDENCE / 2.0);
    let beta_ci = wilson(misses, trials, z);
    if misses == 0 {
        return Err(Error::Inconclusive {
            n,
            trials,
            exponent_lower_bound: -beta_ci[1].ln() / n as f64,
        });
    }
    let beta_hat = misses as f64 / trials as f64;
    let nf = n as f64;
    Ok(ExponentEstimate {
        measurement: model.kind(),
        scenario: *model.scenario(),
        n,
        trials,
        delta,
        seed,
        alpha_hat,
        beta_hat,
        beta_ci,
        exponent_hat: -beta_hat.ln() / nf,
        exponent_ci: [-beta_ci[1].ln() / nf, -beta_ci[0].ln() / nf],
        predicted_first_order: first,
        predicted_second_order: second,
    })
}
