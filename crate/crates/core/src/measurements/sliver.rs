use super::{require_centroid, OutcomeDistribution, OutcomeLabel};
use crate::error::Result;
use crate::scene::{GaussianPsf, Hypothesis, Scenario};

/// Probability that image inversion about the axis returns an even outcome for
/// a source displaced by `d`: `(1 + ω(2d))/2 = (1 + e^{−d²/2σ²})/2`.
pub fn sliver_even_probability(displacement: f64, psf: &GaussianPsf) -> f64 {
    0.5 * (1.0 + (-displacement * displacement / (2.0 * psf.sigma().powi(2))).exp())
}

/// `1 − π_even(d)`, computed directly so it keeps precision at small `d`.
pub fn sliver_odd_probability(displacement: f64, psf: &GaussianPsf) -> f64 {
    -0.5 * (-displacement * displacement / (2.0 * psf.sigma().powi(2))).exp_m1()
}

/// Parity outcome distribution under either hypothesis, centroid pointing.
pub fn sliver_distribution(scenario: &Scenario, hypothesis: Hypothesis) -> Result<OutcomeDistribution> {
    let odd = odd_mass(scenario, hypothesis)?;
    OutcomeDistribution::new(vec![OutcomeLabel::Even, OutcomeLabel::Odd], vec![1.0 - odd, odd])
}

fn odd_mass(scenario: &Scenario, hypothesis: Hypothesis) -> Result<f64> {
    require_centroid(scenario, "SLIVER")?;
    let eps = match hypothesis {
        Hypothesis::H0 => 0.0,
        Hypothesis::H1 => scenario.epsilon(),
    };
    let psf = scenario.psf();
    let s = scenario.separation();
    Ok((1.0 - eps) * sliver_odd_probability(eps * s, &psf)
        + eps * sliver_odd_probability((1.0 - eps) * s, &psf))
}

/// `−ln π₁(even)`; under H0 the even outcome is certain.
pub fn sliver_relative_entropy(scenario: &Scenario) -> Result<f64> {
    Ok(-(-odd_mass(scenario, Hypothesis::H1)?).ln_1p())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::scene::Alignment;
    use crate::single_photon::qre_single_closed;

    #[test]
    fn even_probability() {
        let psf = GaussianPsf::new(1.0).unwrap();
        assert_eq!(sliver_even_probability(0.0, &psf), 1.0);
        assert!((sliver_even_probability(40.0, &psf) - 0.5).abs() < 1e-15);
        let p = sliver_even_probability(0.1, &psf);
        assert!((p - 0.9975062).abs() < 1e-7);
        assert!((p - 0.9975).abs() < 1e-5);
        for d in [0.0, 0.01, 0.7, 3.0] {
            let sum = sliver_even_probability(d, &psf) + sliver_odd_probability(d, &psf);
            assert!((sum - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn even_probability_by_quadrature() {
        // (1/4)∫|ψ(x−d) + ψ(x+d)|² dx on a fine grid.
        let psf = GaussianPsf::new(1.3).unwrap();
        let amp = |x: f64| crate::scene::psf_amplitude(&psf, x);
        for d in [0.1, 0.8, 2.0] {
            let h = 1e-3;
            let grid: f64 = (-20_000..=20_000)
                .map(|i| {
                    let x = i as f64 * h;
                    0.25 * (amp(x - d) + amp(x + d)).powi(2) * h
                })
                .sum();
            assert!((grid - sliver_even_probability(d, &psf)).abs() < 1e-10);
        }
    }

    #[test]
    fn relative_entropy() {
        assert_eq!(sliver_relative_entropy(&Scenario::unit(0.0, 1.0).unwrap()).unwrap(), 0.0);
        let d = sliver_relative_entropy(&Scenario::unit(0.01, 0.2).unwrap()).unwrap();
        assert!((d / 1e-4 - 1.0).abs() < 2e-2, "{d}");
        let s = Scenario::unit(1e-3, 0.05).unwrap();
        let ratio = sliver_relative_entropy(&s).unwrap() / qre_single_closed(&s);
        assert!((0.98..=1.02).contains(&ratio), "{ratio}");
        let star = s.with_alignment(Alignment::StarCentered);
        assert!(matches!(sliver_relative_entropy(&star), Err(Error::Contract(_))));
    }

    #[test]
    fn distribution_consistent_with_entropy() {
        let s = Scenario::unit(0.2, 1.5).unwrap();
        let p0 = sliver_distribution(&s, Hypothesis::H0).unwrap();
        let p1 = sliver_distribution(&s, Hypothesis::H1).unwrap();
        assert_eq!(p0.probability_of(OutcomeLabel::Even), 1.0);
        let d = p0.relative_entropy(&p1).unwrap();
        assert!((d - sliver_relative_entropy(&s).unwrap()).abs() < 1e-15);
    }
}
