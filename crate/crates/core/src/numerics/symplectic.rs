//! Covariance matrices of bosonic modes and their Williamson spectra.
//!
//! Quadratures are ordered `(q₁…q_n, p₁…p_n)` and the symplectic form is
//! `Ω = [[0, I], [−I, 0]]`. Symplectic eigenvalues are read off the Hermitian
//! matrix `V^{1/2} (iΩ) V^{1/2}`, which is similar to `iΩV` but can be handed to a
//! Hermitian eigensolver; its eigenvalues come in pairs `±ν_j`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::eigen::{sym_eig, Spectrum};
use crate::error::{Error, Result};

/// Slack allowed below the vacuum value 1/2 before a matrix is declared unphysical.
pub const PHYSICALITY_TOL: f64 = 1e-10;
const SYMMETRY_TOL: f64 = 1e-12;

/// The `2n×2n` symplectic form `[[0, I], [−I, 0]]`.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        omega[(k, modes + k)] = 1.0;
        omega[(modes + k, k)] = -1.0;
    }
    omega
}

/// Normal-mode data of a covariance matrix `V`.
#[derive(Debug, Clone)]
pub struct WilliamsonModes {
    /// Symplectic eigenvalues, descending.
    pub nu: Vec<f64>,
    /// For each `ν_j`, the vector `y_j = V^{-1/2} q_j` where `q_j` is the unit
    /// eigenvector of `V^{1/2}(iΩ)V^{1/2}` for `+ν_j`. A second state `V₀` has
    /// `ν_j · Re(y_j† V₀ y_j) − 1/2` photons in the `j`-th normal mode of `V`.
    pub vectors: Vec<DVector<Complex64>>,
}

/// A physical covariance matrix: symmetric, with `V + iΩ/2 ⪰ 0`.
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    entries: DMatrix<f64>,
    modes: usize,
    williamson: WilliamsonModes,
}

impl CovarianceMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() % 2 != 0 || entries.nrows() == 0 {
            return Err(Error::Contract(format!(
                "covariance matrix must be 2n×2n, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::Contract("covariance matrix has non-finite entries".into()));
        }
        let asymmetry = (&entries - entries.transpose()).amax();
        if asymmetry > SYMMETRY_TOL * entries.amax().max(1.0) {
            return Err(Error::Contract(format!(
                "covariance matrix is not symmetric (max deviation {asymmetry:e})"
            )));
        }
        let modes = entries.nrows() / 2;
        let williamson = williamson_modes(&entries)?;
        if let Some(&low) = williamson.nu.last() {
            if low < 0.5 - PHYSICALITY_TOL {
                return Err(Error::Unphysical {
                    reason: "symplectic eigenvalue below the vacuum value 1/2".into(),
                    value: low,
                });
            }
        }
        Ok(CovarianceMatrix {
            entries,
            modes,
            williamson,
        })
    }

    /// `(n̄ + 1/2)·I` on every mode.
    pub fn thermal(modes: usize, mean_photons: f64) -> Result<Self> {
        Self::new(DMatrix::identity(2 * modes, 2 * modes) * (mean_photons + 0.5))
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn williamson(&self) -> &WilliamsonModes {
        &self.williamson
    }
}

/// The `n` symplectic eigenvalues of `V`, descending.
pub fn symplectic_eigenvalues(v: &CovarianceMatrix) -> Vec<f64> {
    v.williamson.nu.clone()
}

/// Williamson data of a positive-definite symmetric matrix (no physicality check).
pub fn williamson_modes(v: &DMatrix<f64>) -> Result<WilliamsonModes> {
    let modes = v.nrows() / 2;
    let spectrum = sym_eig(v)?;
    let smallest = *spectrum.eigenvalues.last().expect("non-empty spectrum");
    if !(smallest > 0.0) {
        return Err(Error::Unphysical {
            reason: "covariance matrix is not positive definite".into(),
            value: smallest,
        });
    }
    let to_complex = |m: DMatrix<f64>| m.map(|x| Complex64::new(x, 0.0));
    let root = to_complex(spectrum.map(f64::sqrt));
    let inv_root = to_complex(spectrum.map(|x| 1.0 / x.sqrt()));
    let i_omega = symplectic_form(modes).map(|x| Complex64::new(0.0, x));
    let h = &root * i_omega * &root;
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let Spectrum {
        eigenvalues,
        eigenvectors,
    } = sym_eig(&h)?;
    let dim = 2 * modes;
    let nu = (0..modes)
        .map(|j| 0.5 * (eigenvalues[j] + eigenvalues[dim - 1 - j].abs()))
        .collect();
    let vectors = (0..modes)
        .map(|j| &inv_root * eigenvectors.column(j))
        .collect();
    Ok(WilliamsonModes { nu, vectors })
}
