//! Numerical kernels shared by the physical models.

pub mod eigen;
pub mod hermite;
pub mod quadrature;
pub mod symplectic;

pub use eigen::{sym_eig, Spectrum};
pub use hermite::{hermite_polynomial, hermite_polynomial_capped, DEFAULT_Q_MAX};
pub use quadrature::{integrate_gaussian_weighted, QuadratureRule};
pub use symplectic::{symplectic_eigenvalues, symplectic_form, CovarianceMatrix};

/// `h(y) = (y+1) ln(y+1) − y ln y`, the entropy of a thermal mode with mean
/// occupation `y`, with `h(0) = 0`.
pub fn thermal_entropy(y: f64) -> f64 {
    if y <= 0.0 {
        0.0
    } else {
        (y + 1.0) * y.ln_1p() - y * y.ln()
    }
}

/// `x ln x` with the convention `0 ln 0 = 0`.
pub fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}
