//! Error exponents for deciding whether a faint companion sits next to a bright
//! point source.
//!
//! Two hypotheses are compared photon by photon: H0, a single source, and H1, a
//! source plus a companion of relative brightness `ε` at separation `s`, both
//! blurred by a Gaussian PSF of width `σ`. The Stein exponent of a measurement is
//! the relative entropy between its outcome distributions under H0 and H1. This
//! crate computes it for
//!
//! - direct imaging ([`classical_imaging`]),
//! - the quantum limit for a single photon ([`single_photon`]) and for thermal
//!   light ([`gaussian_thermal`]),
//! - mode sorting and parity sorting ([`measurements`]),
//!
//! and checks the asymptotics with a Monte Carlo likelihood-ratio test
//! ([`hypothesis_sim`]).
//!
//! ```
//! use exodetect::scene::Scenario;
//! use exodetect::{classical_imaging, single_photon};
//!
//! let sc = Scenario::unit(1e-3, 1.0).unwrap();
//! let quantum = single_photon::qre_single_closed(&sc);
//! let direct = classical_imaging::kl_direct_imaging(&sc).unwrap();
//! assert!(quantum > 100.0 * direct);
//! ```

pub mod classical_imaging;
pub mod error;
pub mod gaussian_thermal;
pub mod hypothesis_sim;
pub mod measurements;
pub mod numerics;
pub mod scene;
pub mod single_photon;

pub use error::{Error, Result};
pub use scene::{Alignment, Hypothesis, Scenario};
