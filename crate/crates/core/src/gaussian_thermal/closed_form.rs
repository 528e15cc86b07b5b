use crate::error::{Error, Result};
use crate::scene::Scenario;

fn acoth(x: f64, what: &str) -> Result<f64> {
    if !(x.abs() > 1.0) || !x.is_finite() {
        return Err(Error::ClosedFormDomain(format!(
            "inverse hyperbolic cotangent of {what} = {x} is not real"
        )));
    }
    Ok(0.5 * ((x + 1.0) / (x - 1.0)).ln())
}

fn positive(x: f64, what: &str) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::ClosedFormDomain(format!("{what} = {x} must be positive")));
    }
    Ok(x)
}

/// The published closed-form thermal relative entropy, evaluated term by term
/// exactly as printed.
///
/// With `k = 1 − ω²`, `X = 1 − 4kε + 4kε²`, `Y = √k − 2k^{3/2}ε` and
/// `Z = N²k(1−ε)ε(N + 1 + N²k(1−ε)ε)`:
///
/// ```text
/// D = coth⁻¹(N + N√X + 1)(N + NY/√(X − Xω²) + 1)
///   + coth⁻¹(N − N√X + 1)(N − NY/√(X − Xω²) + 1)
///   + N ln N − N ln(N + 1) − ln(N + 1) + ½ ln Z
/// ```
pub fn qre_thermal_closed(scenario: &Scenario) -> Result<f64> {
    let eps = scenario.epsilon();
    let n = scenario.mean_photons();
    if !(eps > 0.0) {
        return Err(Error::ClosedFormDomain("needs epsilon > 0".into()));
    }
    if !(n > 0.0) {
        return Err(Error::ClosedFormDomain("needs mean_photons > 0".into()));
    }
    let omega = scenario.overlap();
    let k = 1.0 - omega * omega;
    let x = 1.0 - 4.0 * k * eps + 4.0 * k * eps * eps;
    let y = k.sqrt() - 2.0 * k.powf(1.5) * eps;
    let z = n * n * k * (1.0 - eps) * eps * (n + 1.0 + n * n * k * (1.0 - eps) * eps);
    let sqrt_x = positive(x, "X")?.sqrt();
    let ratio = n * y / positive(x - x * omega * omega, "X − Xω²")?.sqrt();
    let first = acoth(n + n * sqrt_x + 1.0, "N + N√X + 1")? * (n + ratio + 1.0);
    let second = acoth(n - n * sqrt_x + 1.0, "N − N√X + 1")? * (n - ratio + 1.0);
    Ok(first + second + n * n.ln() - n * (n + 1.0).ln() - (n + 1.0).ln()
        + 0.5 * positive(z, "Z")?.ln())
}
