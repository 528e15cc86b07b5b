//! Direct imaging: photon-position densities on the image screen and their
//! relative entropy, which is the Stein exponent of an intensity measurement.
//!
//! Positions are measured from the star (star-centered convention); the relative
//! entropy does not depend on the pointing.

use crate::error::Result;
use crate::numerics::integrate_gaussian_weighted;
use crate::scene::{psf_amplitude, Hypothesis, Scenario};

/// Starting quadrature order for the direct-imaging integrals.
pub const QUADRATURE_ORDER: usize = 16;

/// Beyond this separation ratio the log term is evaluated in log-sum-exp form.
const WIDE_SEPARATION: f64 = 3.0;

/// Photon-position density under one hypothesis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensityProfile {
    pub scenario: Scenario,
    pub hypothesis: Hypothesis,
}

impl IntensityProfile {
    pub fn new(scenario: Scenario, hypothesis: Hypothesis) -> Self {
        IntensityProfile {
            scenario,
            hypothesis,
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        match self.hypothesis {
            Hypothesis::H0 => intensity_h0(&self.scenario, x),
            Hypothesis::H1 => intensity_h1(&self.scenario, x),
        }
    }

    pub fn description(&self) -> &'static str {
        match self.hypothesis {
            Hypothesis::H0 => "star only: |psi(x)|^2",
            Hypothesis::H1 => "star and companion: (1-eps)|psi(x)|^2 + eps|psi(x-s)|^2",
        }
    }
}

/// `p₀(x) = |ψ(x)|²`.
pub fn intensity_h0(scenario: &Scenario, x: f64) -> f64 {
    psf_amplitude(&scenario.psf(), x).powi(2)
}

/// `p₁(x) = (1−ε)|ψ(x)|² + ε|ψ(x−s)|²`.
pub fn intensity_h1(scenario: &Scenario, x: f64) -> f64 {
    let psf = scenario.psf();
    let eps = scenario.epsilon();
    (1.0 - eps) * psf_amplitude(&psf, x).powi(2)
        + eps * psf_amplitude(&psf, x - scenario.separation()).powi(2)
}

/// `ln(p₁(x)/p₀(x)) = ln(1 − ε + ε e^{a})` with `a = (2xs − s²)/2σ²`, stable for
/// any `a`. Returns `−∞` only if `ε = 1`, which a valid scenario excludes.
pub fn log_intensity_ratio(scenario: &Scenario, x: f64) -> f64 {
    let t = scenario.separation_ratio();
    let u = x / scenario.sigma();
    log_mixture_ratio(scenario.epsilon(), (2.0 * u * t - t * t) / 2.0)
}

fn log_mixture_ratio(eps: f64, a: f64) -> f64 {
    if eps == 0.0 {
        0.0
    } else if a > 0.0 {
        // ln(1−ε+εe^a) = a + ln(ε + (1−ε)e^{−a})
        a + (eps + (1.0 - eps) * (-a).exp()).ln()
    } else {
        (eps * a.exp_m1()).ln_1p()
    }
}

/// `z − ln(1+z)` without cancellation for small `z`.
fn second_order_log_remainder(z: f64) -> f64 {
    if z.abs() < 1e-3 {
        let mut term = z * z;
        let mut sum = 0.0;
        for k in 2..=7 {
            sum += if k % 2 == 0 { term } else { -term } / k as f64;
            term *= z;
        }
        sum
    } else {
        z - z.ln_1p()
    }
}

/// `D(p₀‖p₁)` in nats, by Gauss–Hermite quadrature against `p₀`.
///
/// Because `E_{p₀}[p₁/p₀ − 1] = 0`, the integrand `−ln(1+z)` with
/// `z = p₁/p₀ − 1` can be replaced by `z − ln(1+z)`, which keeps full relative
/// accuracy when `εs` is tiny. At wide separations, where `e^a` would overflow
/// at the outer nodes, the plain log-sum-exp form is integrated instead.
pub fn kl_direct_imaging(scenario: &Scenario) -> Result<f64> {
    let eps = scenario.epsilon();
    let t = scenario.separation_ratio();
    if eps * t == 0.0 {
        return Ok(0.0);
    }
    let d = if t <= WIDE_SEPARATION {
        integrate_gaussian_weighted(
            |u| second_order_log_remainder(eps * ((2.0 * u * t - t * t) / 2.0).exp_m1()),
            0.0,
            1.0,
            QUADRATURE_ORDER,
        )?
    } else {
        -integrate_gaussian_weighted(
            |u| log_mixture_ratio(eps, (2.0 * u * t - t * t) / 2.0),
            0.0,
            1.0,
            QUADRATURE_ORDER,
        )?
    };
    Ok(d.max(0.0))
}

/// Leading small-`ε` term `(e^{s²/σ²} − 1)·ε²/2`.
pub fn kl_direct_imaging_series(scenario: &Scenario) -> f64 {
    let t = scenario.separation_ratio();
    (t * t).exp_m1() * scenario.epsilon().powi(2) / 2.0
}

/// `Var_{p₀}[ln(p₀/p₁)]`, the second-order coefficient of the Stein expansion.
pub fn kl_direct_imaging_variance(scenario: &Scenario) -> Result<f64> {
    let eps = scenario.epsilon();
    let t = scenario.separation_ratio();
    if eps * t == 0.0 {
        return Ok(0.0);
    }
    let second = integrate_gaussian_weighted(
        |u| log_mixture_ratio(eps, (2.0 * u * t - t * t) / 2.0).powi(2),
        0.0,
        1.0,
        QUADRATURE_ORDER,
    )?;
    let d = kl_direct_imaging(scenario)?;
    Ok((second - d * d).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::Alignment;

    fn star(eps: f64, s: f64, sigma: f64) -> Scenario {
        Scenario::new(eps, s, sigma, 0.0, Alignment::StarCentered).unwrap()
    }

    /// Plain trapezoid rule on the raw densities, no substitution or subtraction.
    fn riemann_kl(sc: &Scenario, points: usize) -> f64 {
        let sigma = sc.sigma();
        let (lo, hi) = (-16.0 * sigma, sc.separation() + 16.0 * sigma);
        let h = (hi - lo) / points as f64;
        (0..=points)
            .map(|i| {
                let x = lo + i as f64 * h;
                let p0 = intensity_h0(sc, x);
                let p1 = intensity_h1(sc, x);
                let w = if i == 0 || i == points { 0.5 } else { 1.0 };
                if p0 > 0.0 {
                    w * h * p0 * (p0 / p1).ln()
                } else {
                    0.0
                }
            })
            .sum()
    }

    #[test]
    fn profiles() {
        let sc = star(0.2, 1.0, 1.0);
        let direct = 0.8 * (2.0 * std::f64::consts::PI).powf(-0.5)
            + 0.2 * (2.0 * std::f64::consts::PI).powf(-0.5) * (-0.5f64).exp();
        assert!((intensity_h1(&sc, 0.0) - direct).abs() < 1e-15);
        assert!((intensity_h1(&sc, 0.0) - 0.367548).abs() < 1e-6);
        let same = star(0.0, 1.0, 1.0);
        let zero_sep = star(0.3, 0.0, 1.0);
        for x in [-2.0, -0.3, 0.0, 0.8, 3.1] {
            assert_eq!(intensity_h1(&same, x), intensity_h0(&same, x));
            assert!((intensity_h1(&zero_sep, x) - intensity_h0(&zero_sep, x)).abs() < 1e-16);
        }
    }

    #[test]
    fn profiles_normalized() {
        for hyp in [Hypothesis::H0, Hypothesis::H1] {
            let p = IntensityProfile::new(star(0.3, 2.0, 1.5), hyp);
            let total = integrate_gaussian_weighted(
                |x| p.density(x) / intensity_h0(&p.scenario, x),
                0.0,
                1.5,
                16,
            )
            .unwrap();
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn kl_trivial_cases() {
        assert_eq!(kl_direct_imaging(&star(0.0, 1.0, 1.0)).unwrap(), 0.0);
        assert_eq!(kl_direct_imaging(&star(0.4, 0.0, 1.0)).unwrap(), 0.0);
        assert_eq!(kl_direct_imaging_series(&star(0.0, 1.0, 1.0)), 0.0);
    }

    #[test]
    fn kl_small_epsilon() {
        let sc = star(0.001, 1.0, 1.0);
        let d = kl_direct_imaging(&sc).unwrap();
        // Two terms of the ε-expansion: E[z²]/2 − E[z³]/3 with z = ε(e^a − 1).
        let e = std::f64::consts::E;
        let two_term = 1e-6 * (e - 1.0) / 2.0 - 1e-9 * (e.powi(3) - 3.0 * e + 2.0) / 3.0;
        assert!((d / two_term - 1.0).abs() < 1e-4, "{d}");
        assert!((d / 8.5914e-7 - 1.0).abs() < 6e-3, "{d}");
        let series = kl_direct_imaging_series(&sc);
        assert!((series - 8.59141e-7).abs() < 1e-11);
        let oracle = riemann_kl(&sc, 1_000_000);
        assert!((d - oracle).abs() < 1e-6 * d, "{d} vs {oracle}");
    }

    #[test]
    fn kl_matches_grid_oracle() {
        for (eps, s) in [(0.5, 4.0), (0.3, 2.0), (0.05, 6.0), (0.9, 3.5)] {
            let sc = star(eps, s, 1.0);
            let d = kl_direct_imaging(&sc).unwrap();
            let oracle = riemann_kl(&sc, 1_000_000);
            assert!((d - oracle).abs() <= 1e-8 * oracle, "({eps}, {s}): {d} vs {oracle}");
        }
    }

    #[test]
    fn series_agrees_at_small_epsilon() {
        let sc = star(1e-4, 0.5, 1.0);
        let ratio = kl_direct_imaging(&sc).unwrap() / kl_direct_imaging_series(&sc);
        assert!((ratio - 1.0).abs() < 1e-2);
    }

    #[test]
    fn invariant_under_rescaling() {
        let a = kl_direct_imaging(&star(0.1, 1.5, 1.0)).unwrap();
        let b = kl_direct_imaging(&star(0.1, 3.0, 2.0)).unwrap();
        assert!((a - b).abs() <= 1e-13 * a);
    }

    #[test]
    fn extreme_separation_is_finite() {
        let sc = star(0.2, 12.0, 1.0);
        let d = kl_direct_imaging(&sc).unwrap();
        // Nearly disjoint supports: D → −ln(1−ε).
        assert!((d + (0.8f64).ln()).abs() < 1e-8, "{d}");
        let oracle = riemann_kl(&sc, 1_000_000);
        assert!((d - oracle).abs() <= 1e-8 * oracle, "{d} vs {oracle}");
    }

    #[test]
    fn variance_matches_grid() {
        let sc = star(0.3, 2.0, 1.0);
        let b = kl_direct_imaging_variance(&sc).unwrap();
        let h = 1e-4;
        let (mut m1, mut m2) = (0.0, 0.0);
        for i in -200_000..=200_000 {
            let x = i as f64 * h;
            let p0 = intensity_h0(&sc, x);
            let l = (p0 / intensity_h1(&sc, x)).ln();
            m1 += h * p0 * l;
            m2 += h * p0 * l * l;
        }
        assert!((b - (m2 - m1 * m1)).abs() < 1e-9, "{b}");
    }
}
