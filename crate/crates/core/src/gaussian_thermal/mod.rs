//! Thermal light: both sources emit thermal states, the image-plane field is a
//! two-mode Gaussian state, and the quantum relative entropy is computed from
//! covariance matrices.
//!
//! The two modes are the symmetric and antisymmetric combinations of the star
//! and companion PSF modes. Their mean occupations under H1 are
//! `(1 ± ω)N/2`, and the incoherent mixture of the sources correlates them with
//! strength `(N/2)√(1−ω²)(1−2ε)`. Mean photon numbers are fixed at the image
//! plane, so any transmission loss upstream drops out.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::symplectic::{symplectic_form, PHYSICALITY_TOL};
use crate::numerics::{sym_eig, symplectic_eigenvalues, thermal_entropy};
use crate::scene::{Hypothesis, Scenario};

mod closed_form;
mod validation;

pub use crate::numerics::CovarianceMatrix;
pub use closed_form::qre_thermal_closed;
pub use validation::{validate_thermal_closed_form, validation_grid, ValidationPoint, ValidationReport};

/// Below this occupation a normal mode of `V₁` counts as pure.
const PURE_MODE_TOL: f64 = 1e-10;

/// Entries of the two-mode covariance matrix for one hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalSceneCM {
    pub mu_plus: f64,
    pub mu_minus: f64,
    pub nu: f64,
}

impl ThermalSceneCM {
    pub fn new(scenario: &Scenario, hypothesis: Hypothesis) -> Self {
        let n = scenario.mean_photons();
        let eps = match hypothesis {
            Hypothesis::H0 => 0.0,
            Hypothesis::H1 => scenario.epsilon(),
        };
        let omega = scenario.overlap();
        let t = scenario.separation_ratio();
        let one_minus_omega = -(-t * t / 8.0).exp_m1();
        ThermalSceneCM {
            mu_plus: ((1.0 + omega) * n + 1.0) / 2.0,
            mu_minus: (one_minus_omega * n + 1.0) / 2.0,
            nu: n / 2.0 * scenario.overlap_deficit().sqrt() * (1.0 - 2.0 * eps),
        }
    }

    /// The 4×4 matrix in `(q₊, q₋, p₊, p₋)` order: the same 2×2 block
    /// `[[μ₊, ν], [ν, μ₋]]` on positions and on momenta.
    pub fn assemble(&self) -> Result<CovarianceMatrix> {
        let ThermalSceneCM {
            mu_plus: a,
            mu_minus: b,
            nu: c,
        } = *self;
        #[rustfmt::skip]
        let entries = DMatrix::from_row_slice(4, 4, &[
            a, c, 0.0, 0.0,
            c, b, 0.0, 0.0,
            0.0, 0.0, a, c,
            0.0, 0.0, c, b,
        ]);
        CovarianceMatrix::new(entries).map_err(|e| {
            Error::Contract(format!("thermal covariance matrix failed validation: {e}"))
        })
    }
}

/// Covariance matrix of the image-plane field under the given hypothesis.
pub fn build_cm(scenario: &Scenario, hypothesis: Hypothesis) -> Result<CovarianceMatrix> {
    ThermalSceneCM::new(scenario, hypothesis).assemble()
}

/// Occupations below this are eigensolver noise on a vacuum mode.
const VACUUM_NOISE: f64 = 1e-14;

/// `S(ρ) = Σ_j h(ν_j − 1/2)`.
pub fn von_neumann_entropy(v: &CovarianceMatrix) -> f64 {
    symplectic_eigenvalues(v)
        .into_iter()
        .map(|nu| nu - 0.5)
        .filter(|&n| n > VACUUM_NOISE)
        .map(thermal_entropy)
        .sum()
}

/// `D(ρ₀‖ρ₁)` for two zero-mean Gaussian states.
///
/// Expands `−Tr[ρ₀ ln ρ₁]` in the normal modes of `ρ₁`: with occupations `n_j`
/// of `ρ₁` and `m_j` of `ρ₀` in those same modes,
/// `D = −S(ρ₀) + Σ_j [(m_j + 1) ln(1 + n_j) − m_j ln n_j]`.
/// This is the covariance-matrix formula `−S(ρ₀) + ½(ln det(V₁ + iΩ/2) + Tr[V₀G₁])`
/// regrouped mode by mode, which keeps nearly pure modes of `ρ₁` accurate.
pub fn gaussian_relative_entropy(v0: &CovarianceMatrix, v1: &CovarianceMatrix) -> Result<f64> {
    if v0.modes() != v1.modes() {
        return Err(Error::Contract(format!(
            "mode count mismatch: {} vs {}",
            v0.modes(),
            v1.modes()
        )));
    }
    let v0c = v0.entries().map(|x| Complex64::new(x, 0.0));
    let modes = v1.williamson();
    let mut cross = 0.0;
    for (&nu, y) in modes.nu.iter().zip(&modes.vectors) {
        let n = (nu - 0.5).max(0.0);
        let m = (nu * (y.adjoint() * &v0c * y)[(0, 0)].re - 0.5).max(0.0);
        if n <= PURE_MODE_TOL {
            if m > PURE_MODE_TOL {
                return Err(Error::Divergence(format!(
                    "a normal mode of the second state is pure (occupation {n:e}) but the first state puts {m:e} photons in it"
                )));
            }
            cross += (m + 1.0) * n.ln_1p();
            continue;
        }
        cross += (m + 1.0) * n.ln_1p() - m * n.ln();
    }
    Ok((cross - von_neumann_entropy(v0)).max(0.0))
}

/// `G₁ = 2iΩ coth⁻¹(2V₁iΩ)`, real symmetric.
///
/// Evaluated as `2iΩ W coth⁻¹(H) W⁻¹` with `W = V₁^{1/2}` and the Hermitian
/// `H = 2W(iΩ)W`, which is similar to `2V₁iΩ`.
pub fn g_matrix(v1: &CovarianceMatrix) -> Result<DMatrix<f64>> {
    let dim = 2 * v1.modes();
    let spectrum = sym_eig(v1.entries())?;
    let root = spectrum.map(f64::sqrt).map(|x| Complex64::new(x, 0.0));
    let inv_root = spectrum.map(|x| 1.0 / x.sqrt()).map(|x| Complex64::new(x, 0.0));
    let i_omega = symplectic_form(v1.modes()).map(|x| Complex64::new(0.0, x));
    let h = &root * &i_omega * &root * Complex64::new(2.0, 0.0);
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let hs = sym_eig(&h)?;
    if let Some(&x) = hs.eigenvalues.iter().find(|x| x.abs() <= 1.0 + 2.0 * PHYSICALITY_TOL) {
        return Err(Error::Divergence(format!(
            "inverse hyperbolic cotangent undefined at eigenvalue {x} (pure mode)"
        )));
    }
    let acoth = hs.map(|x| 0.5 * ((x + 1.0) / (x - 1.0)).ln());
    let g = i_omega * Complex64::new(2.0, 0.0) * root * acoth * inv_root;
    let imag = g.map(|z| z.im.abs()).max();
    if imag > 1e-9 {
        return Err(Error::Contract(format!("G matrix has imaginary residue {imag:e}")));
    }
    let real = g.map(|z| z.re);
    let asym = (&real - real.transpose()).amax();
    if asym > 1e-9 * real.amax().max(1.0) {
        return Err(Error::Contract(format!("G matrix is not symmetric ({asym:e})")));
    }
    debug_assert_eq!(real.nrows(), dim);
    Ok((&real + real.transpose()) * 0.5)
}

/// `ln det(V + iΩ/2)` from the eigenvalues of the Hermitian matrix `V + iΩ/2`.
pub fn log_det_uncertainty(v: &CovarianceMatrix) -> Result<f64> {
    let half_i_omega = symplectic_form(v.modes()).map(|x| Complex64::new(0.0, 0.5 * x));
    let m = v.entries().map(|x| Complex64::new(x, 0.0)) + half_i_omega;
    let s = sym_eig(&m)?;
    if let Some(&x) = s.eigenvalues.iter().find(|&&x| x <= 0.0) {
        return Err(Error::Divergence(format!("V + iΩ/2 is singular (eigenvalue {x:e})")));
    }
    Ok(s.eigenvalues.iter().map(|x| x.ln()).sum())
}

/// `D(ρ₀‖ρ₁)` for the two-mode thermal scene, from the covariance matrices.
pub fn qre_thermal(scenario: &Scenario) -> Result<f64> {
    let v0 = build_cm(scenario, Hypothesis::H0)?;
    let v1 = build_cm(scenario, Hypothesis::H1)?;
    gaussian_relative_entropy(&v0, &v1)
}

/// `N(1 − ω²)ε`.
pub fn qre_thermal_leading(scenario: &Scenario) -> f64 {
    scenario.mean_photons() * scenario.overlap_deficit() * scenario.epsilon()
}
