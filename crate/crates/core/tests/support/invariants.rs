// Randomized invariants shared by the property suite and the acceptance run.
// Each function runs 256 cases and panics on the first counterexample.

use exodetect::classical_imaging::kl_direct_imaging;
use exodetect::gaussian_thermal::{
    g_matrix, gaussian_relative_entropy, log_det_uncertainty, qre_thermal, von_neumann_entropy,
};
use exodetect::measurements::{
    sliver_distribution, sliver_relative_entropy, spade_distribution, spade_relative_entropy,
    spade_thermal_distribution, DEFAULT_Q_MAX,
};
use exodetect::numerics::{integrate_gaussian_weighted, sym_eig, symplectic_eigenvalues, CovarianceMatrix};
use exodetect::single_photon::{density_matrices, qre_from_states, qre_single_closed};
use exodetect::{Alignment, Hypothesis, Scenario};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 256,
        // The file is included from more than one test target, so there is no
        // single source path to persist failing seeds next to.
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// Symplectic maps on two modes in (q₁, q₂, p₁, p₂) order.
fn rotation(mode: usize, theta: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(4, 4);
    let (c, si) = (theta.cos(), theta.sin());
    s[(mode, mode)] = c;
    s[(mode, mode + 2)] = si;
    s[(mode + 2, mode)] = -si;
    s[(mode + 2, mode + 2)] = c;
    s
}

fn squeezer(mode: usize, r: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(4, 4);
    s[(mode, mode)] = (-r).exp();
    s[(mode + 2, mode + 2)] = r.exp();
    s
}

fn beam_splitter(theta: f64) -> DMatrix<f64> {
    let (c, si) = (theta.cos(), theta.sin());
    let mut s = DMatrix::zeros(4, 4);
    for off in [0, 2] {
        s[(off, off)] = c;
        s[(off, off + 1)] = si;
        s[(off + 1, off)] = -si;
        s[(off + 1, off + 1)] = c;
    }
    s
}

prop_compose! {
    fn symplectic()(t1 in -3.0..3.0f64, t2 in -3.0..3.0f64, r1 in -0.8..0.8f64,
                    r2 in -0.8..0.8f64, b in -3.0..3.0f64, t3 in -3.0..3.0f64) -> DMatrix<f64> {
        rotation(0, t3) * beam_splitter(b) * squeezer(0, r1) * squeezer(1, r2)
            * rotation(0, t1) * rotation(1, t2)
    }
}

prop_compose! {
    fn physical_cm(min_excess: f64)(n1 in 0.0..4.0f64, n2 in 0.0..4.0f64, s in symplectic())
        -> (DMatrix<f64>, [f64; 2]) {
        let (a, b) = (0.5 + min_excess + n1, 0.5 + min_excess + n2);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![a, b, a, b]));
        let v = &s * d * s.transpose();
        ((&v + v.transpose()) * 0.5, [a, b])
    }
}

fn centroid(eps: f64, s: f64, n: f64) -> Scenario {
    Scenario::new(eps, s, 1.0, n, Alignment::CentroidCentered).unwrap()
}

proptest! {
    #![proptest_config(config())]

    fn quadrature_converges_on_smooth_integrands(
        center in -3.0..3.0f64, width in 0.1..3.0f64, t in -2.0..2.0f64, c2 in -1.0..1.0f64,
    ) {
        // E[e^{tX}] + c₂E[X²] for X ~ N(center, width²).
        let f = |x: f64| (t * x).exp() + c2 * x * x;
        let exact = (t * center + t * t * width * width / 2.0).exp()
            + c2 * (width * width + center * center);
        let v = integrate_gaussian_weighted(f, center, width, 16).unwrap();
        prop_assert!((v - exact).abs() <= 1e-10 * exact.abs().max(1.0), "{} vs {}", v, exact);
    }

    fn eigen_reconstruction(n in 1usize..=8, seed in proptest::collection::vec(-10.0..10.0f64, 64),
                            imag in proptest::collection::vec(-10.0..10.0f64, 64)) {
        let a = DMatrix::from_fn(n, n, |i, j| seed[i * 8 + j]);
        let m = (&a + a.transpose()) * 0.5;
        let s = sym_eig(&m).unwrap();
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        let err = (s.reconstruct() - &m).norm();
        prop_assert!(err <= 1e-12 * m.norm().max(f64::MIN_POSITIVE), "{}", err);
        let gram = s.eigenvectors.transpose() * &s.eigenvectors;
        prop_assert!((gram - DMatrix::identity(n, n)).amax() <= 1e-12);

        let c = DMatrix::from_fn(n, n, |i, j| Complex64::new(seed[i * 8 + j], imag[i * 8 + j]));
        let h = (&c + c.adjoint()) * Complex64::new(0.5, 0.0);
        let s = sym_eig(&h).unwrap();
        let err = (s.reconstruct() - &h).norm();
        prop_assert!(err <= 1e-12 * h.norm(), "{}", err);
        let gram = s.eigenvectors.adjoint() * &s.eigenvectors;
        prop_assert!((gram - DMatrix::identity(n, n)).norm() <= 1e-12 * n as f64);
    }

    fn symplectic_invariance((v, nus) in physical_cm(0.0), s in symplectic()) {
        let before = symplectic_eigenvalues(&CovarianceMatrix::new(v.clone()).unwrap());
        let moved = &s * &v * s.transpose();
        let after = symplectic_eigenvalues(&CovarianceMatrix::new((&moved + moved.transpose()) * 0.5).unwrap());
        let mut expected = nus.to_vec();
        expected.sort_by(|a, b| b.total_cmp(a));
        for k in 0..2 {
            prop_assert!((before[k] - after[k]).abs() <= 1e-10 * before[k].max(1.0));
            prop_assert!((before[k] - expected[k]).abs() <= 1e-10 * expected[k].max(1.0));
        }
    }

    fn distributions_are_normalized(eps in 0.0..0.99f64, s in 0.0..8.0f64, n in 1e-4..10.0f64) {
        let sc = centroid(eps, s, n);
        let mut dists = Vec::new();
        for h in [Hypothesis::H0, Hypothesis::H1] {
            dists.push(spade_distribution(&sc, h, DEFAULT_Q_MAX).unwrap());
            dists.push(sliver_distribution(&sc, h).unwrap());
            dists.push(spade_thermal_distribution(&sc, h).unwrap());
        }
        for d in dists {
            prop_assert!(d.probabilities().iter().all(|&p| p >= 0.0));
            let total: f64 = d.probabilities().iter().sum();
            prop_assert!((total - 1.0).abs() <= 1e-9, "{}", total);
        }
    }

    fn divergences_are_ordered_and_nonnegative(log_eps in -4.0..-0.5f64, s in 0.05..4.0f64) {
        let eps = 10f64.powf(log_eps);
        let sc = centroid(eps, s, 0.0);
        let quantum = qre_single_closed(&sc);
        let di = kl_direct_imaging(&sc).unwrap();
        let spade = spade_relative_entropy(&sc).unwrap();
        let sliver = sliver_relative_entropy(&sc).unwrap();
        prop_assert!(di > 0.0 && spade > 0.0 && sliver > 0.0 && quantum > 0.0);
        prop_assert!(di <= quantum * (1.0 + 1e-12), "DI {} > quantum {}", di, quantum);
        // Centroid pointing moves the axis between hypotheses, so the bound by the
        // fixed-axis quantum value only holds up to s ≈ 2.3σ (see the grid test).
        if s <= 2.0 {
            prop_assert!(spade <= quantum, "SPADE {} > quantum {}", spade, quantum);
            prop_assert!(sliver <= quantum, "SLIVER {} > quantum {}", sliver, quantum);
        }
        let (r0, r1) = density_matrices(&sc);
        prop_assert!((qre_from_states(&r0, &r1).unwrap() - quantum).abs() <= 1e-10);
        let thermal = qre_thermal(&centroid(eps, s, 0.5)).unwrap();
        prop_assert!(thermal > 0.0);
    }

    fn gaussian_relative_entropy_properties((v0, _) in physical_cm(0.0), (v1, _) in physical_cm(0.05)) {
        let v0 = CovarianceMatrix::new(v0).unwrap();
        let v1 = CovarianceMatrix::new(v1).unwrap();
        let d = gaussian_relative_entropy(&v0, &v1).unwrap();
        prop_assert!(d >= 0.0);
        prop_assert!(gaussian_relative_entropy(&v1, &v1).unwrap().abs() <= 1e-9);
        // Same value from the covariance-matrix expression.
        let g = g_matrix(&v1).unwrap();
        let via = -von_neumann_entropy(&v0)
            + 0.5 * (log_det_uncertainty(&v1).unwrap() + (v0.entries() * g).trace());
        prop_assert!((via - d).abs() <= 1e-8 * d.max(1.0), "{} vs {}", via, d);
    }
}
