//! Monte Carlo check of the Stein exponent.
//!
//! Photon records are drawn under each hypothesis, a likelihood-ratio test is
//! calibrated on H0 records to a type-I budget `δ`, and the type-II rate on H1
//! records gives an empirical exponent `−ln β̂ / n` to compare with the
//! relative entropy of the measurement.

mod estimate;
mod model;

pub use estimate::{estimate_type2_exponent, predicted_exponent, tune_n, ExponentEstimate, MIN_CALIBRATION_RECORDS, MIN_TRIALS};
pub use model::{neyman_pearson_test, sample_record, Decision, MeasurementKind, MeasurementModel, Outcome};
