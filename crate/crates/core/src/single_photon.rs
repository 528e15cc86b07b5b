//! One photon, two hypotheses: the states live in the plane spanned by the star
//! and companion PSFs, and their quantum relative entropy bounds every
//! measurement's error exponent.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{sym_eig, xlogx};
use crate::scene::Scenario;

const STATE_TOL: f64 = 1e-12;
/// Eigenvalues of `ρ₁` at or below this count as outside its support.
pub const SUPPORT_TOL: f64 = 1e-12;
/// Below this value of `ε(1−ω²)` the closed form returns its leading term.
const LEADING_ORDER_CUTOFF: f64 = 1e-14;

/// A validated density matrix of dimension at most 4.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let d = entries.nrows();
        if !entries.is_square() || d == 0 || d > 4 {
            return Err(Error::Contract(format!(
                "density matrix must be d×d with 1 ≤ d ≤ 4, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::Contract(format!("trace is {trace}, not 1")));
        }
        let spectrum = sym_eig(&entries)?;
        let lowest = *spectrum.eigenvalues.last().expect("non-empty");
        if lowest < -STATE_TOL {
            return Err(Error::Contract(format!(
                "density matrix has negative eigenvalue {lowest:e}"
            )));
        }
        Ok(DensityMatrix { entries })
    }

    pub fn from_real(d: usize, row_major: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_row_slice(d, d, row_major).map(|x| Complex64::new(x, 0.0)))
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn dimension(&self) -> usize {
        self.entries.nrows()
    }
}

/// `(ρ₀, ρ₁)` in the orthonormal basis built from the star PSF and the
/// normalized component of the companion PSF orthogonal to it.
pub fn density_matrices(scenario: &Scenario) -> (DensityMatrix, DensityMatrix) {
    let eps = scenario.epsilon();
    let omega = scenario.overlap();
    let k = scenario.overlap_deficit();
    let coherence = eps * omega * k.sqrt();
    let rho0 = DensityMatrix::from_real(2, &[1.0, 0.0, 0.0, 0.0]).expect("pure state");
    let rho1 = DensityMatrix::from_real(2, &[1.0 - eps * k, coherence, coherence, eps * k])
        .expect("mixture of two pure states");
    (rho0, rho1)
}

/// `Tr[ρ₀(ln ρ₀ − ln ρ₁)]` from the two eigendecompositions, `+∞` when the
/// support of `ρ₀` is not contained in that of `ρ₁`.
pub fn qre_from_states(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    if rho0.dimension() != rho1.dimension() {
        return Err(Error::Contract(format!(
            "dimension mismatch: {} vs {}",
            rho0.dimension(),
            rho1.dimension()
        )));
    }
    let s0 = sym_eig(rho0.entries())?;
    let s1 = sym_eig(rho1.entries())?;
    let neg_entropy: f64 = s0.eigenvalues.iter().map(|&p| xlogx(p.max(0.0))).sum();
    let mut cross = 0.0;
    for (j, &q) in s1.eigenvalues.iter().enumerate() {
        let b = s1.eigenvectors.column(j);
        // ⟨b_j|ρ₀|b_j⟩
        let weight = (b.adjoint() * rho0.entries() * b)[(0, 0)].re;
        if q <= SUPPORT_TOL {
            if weight > SUPPORT_TOL {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * q.ln();
    }
    Ok((neg_entropy - cross).max(0.0))
}

/// Closed-form `D(ρ₀‖ρ₁)` with `u = √(1 − 4ε(1−ε)(1−ω²))`, evaluated in a form
/// free of cancellation as `u → 1`.
pub fn qre_single_closed(scenario: &Scenario) -> f64 {
    let eps = scenario.epsilon();
    let k = scenario.overlap_deficit();
    let omega = scenario.overlap();
    if eps == 0.0 || k == 0.0 {
        return 0.0;
    }
    if omega == 0.0 {
        return -(-eps).ln_1p();
    }
    if eps * k < LEADING_ORDER_CUTOFF {
        return eps * k;
    }
    let d = 4.0 * eps * (1.0 - eps) * k;
    let u = (1.0 - d).sqrt();
    let one_minus_u = d / (1.0 + u);
    let gap = if eps <= 0.5 {
        // 1 − 2ε − u
        -4.0 * eps * (1.0 - eps) * omega * omega / (1.0 - 2.0 * eps + u)
    } else {
        1.0 - 2.0 * eps - u
    };
    // Weight of the star state on the small eigenvalue (1−u)/2 of ρ₁.
    let w_small = -eps * k * gap / (u * (1.0 + u));
    let w_large = 1.0 - w_small;
    -w_large * (-one_minus_u / 2.0).ln_1p() - w_small * (one_minus_u / 2.0).ln()
}

/// `(1 − ω²)ε`.
pub fn qre_single_leading(scenario: &Scenario) -> f64 {
    scenario.overlap_deficit() * scenario.epsilon()
}
