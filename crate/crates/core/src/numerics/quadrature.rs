//! Gauss–Hermite quadrature against a normalized Gaussian weight, with adaptive
//! order escalation.
//!
//! Rules are generated for the standard normal weight `exp(-z²/2)/√(2π)`, so the
//! weights of every rule sum to one. Nodes are located by Sturm-sequence bisection
//! on the symmetric Jacobi matrix of the Hermite recurrence, which stays robust at
//! the high orders (up to 1024) that sharp integrands need; weights come from the
//! orthonormal three-term recurrence evaluated with running rescaling so that
//! nothing overflows far out in the tails. Nodes whose weight underflows to zero
//! are dropped.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Smallest order accepted by [`integrate_gaussian_weighted`].
pub const MIN_ORDER: usize = 16;
/// Adaptive escalation stops once the next doubling would exceed this order.
pub const MAX_ORDER: usize = 1024;
/// Relative change allowed between successive orders.
pub const CONVERGENCE_RTOL: f64 = 1e-10;
/// Absolute floor, relative to `Σ w|f|`, for integrals that cancel to ~0.
const CANCELLATION_FLOOR: f64 = 1e-15;

/// A quadrature rule for `∫ f(z) φ(z) dz` with `φ` the standard normal density.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    order: usize,
}

impl QuadratureRule {
    /// The `order`-point Gauss–Hermite rule, shared through a process-wide cache.
    pub fn gauss_hermite(order: usize) -> Arc<QuadratureRule> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(rule) = cache.lock().expect("quadrature cache poisoned").get(&order) {
            return Arc::clone(rule);
        }
        // Built outside the lock; a racing thread at worst computes the same rule twice.
        let rule = Arc::new(build_gauss_hermite(order));
        cache
            .lock()
            .expect("quadrature cache poisoned")
            .entry(order)
            .or_insert(rule)
            .clone()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nominal number of points (nodes with underflowed weights are not stored).
    pub fn order(&self) -> usize {
        self.order
    }

    /// Applies the rule to `f` on the standard normal weight. Also returns `Σ w|f|`.
    fn apply<F: Fn(f64) -> f64>(&self, f: &F, center: f64, width: f64) -> Result<(f64, f64)> {
        let mut sum = 0.0;
        let mut magnitude = 0.0;
        for (&z, &w) in self.nodes.iter().zip(&self.weights) {
            let x = center + width * z;
            let fx = f(x);
            if !fx.is_finite() {
                return Err(Error::NonFiniteIntegrand { x });
            }
            sum += w * fx;
            magnitude += w * fx.abs();
        }
        Ok((sum, magnitude))
    }

    /// `∫ f(x) g(x) dx` with `g` the normal density of the given center and width.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, center: f64, width: f64) -> Result<f64> {
        self.apply(&f, center, width).map(|(sum, _)| sum)
    }
}

/// `∫ f(x) g(x) dx` where `g` is the normalized Gaussian with the given `center`
/// and standard deviation `width`.
///
/// Starts at `order` points and doubles until two successive estimates agree to
/// [`CONVERGENCE_RTOL`] relative, giving up with [`Error::AccuracyFailure`] once
/// the order would pass [`MAX_ORDER`].
pub fn integrate_gaussian_weighted<F>(f: F, center: f64, width: f64, order: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if order < MIN_ORDER {
        return Err(Error::Contract(format!(
            "quadrature order {order} is below the minimum {MIN_ORDER}"
        )));
    }
    if !(width > 0.0 && width.is_finite()) || !center.is_finite() {
        return Err(Error::Contract(format!(
            "gaussian weight needs a finite center and positive width, got ({center}, {width})"
        )));
    }
    let mut order = order;
    let mut before_previous = f64::NAN;
    let (mut previous, _) = QuadratureRule::gauss_hermite(order).apply(&f, center, width)?;
    loop {
        let next_order = order * 2;
        if next_order > MAX_ORDER {
            return Err(Error::AccuracyFailure {
                order,
                previous: before_previous,
                last: previous,
            });
        }
        let (current, magnitude) =
            QuadratureRule::gauss_hermite(next_order).apply(&f, center, width)?;
        let change = (current - previous).abs();
        if change <= CONVERGENCE_RTOL * current.abs() || change <= CANCELLATION_FLOOR * magnitude {
            return Ok(current);
        }
        before_previous = previous;
        previous = current;
        order = next_order;
    }
}

fn build_gauss_hermite(order: usize) -> QuadratureRule {
    assert!(order >= 1, "quadrature order must be positive");
    let n = order;
    // Off-diagonal of the physicists' Hermite Jacobi matrix, squared: k/2.
    let off_sq: Vec<f64> = (1..n).map(|k| k as f64 / 2.0).collect();
    let eigen_count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut d = -x;
        if d < 0.0 {
            count += 1;
        }
        for &b2 in &off_sq {
            if d == 0.0 {
                d = f64::MIN_POSITIVE;
            }
            d = -x - b2 / d;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };

    // Positive roots, largest first. Root j (ascending, 0-based) is where the
    // Sturm count first exceeds j.
    let half = n / 2;
    let mut positive = Vec::with_capacity(half);
    let mut upper = (2.0 * n as f64 + 1.0).sqrt() + 1.0;
    for k in 0..half {
        let target = n - k;
        let (mut lo, mut hi) = (0.0_f64, upper);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if eigen_count_below(mid) >= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        positive.push(root);
        upper = root;
    }

    let log_weight = |x: f64| -> f64 {
        let (mut p1, mut p2) = (1.0_f64, 0.0_f64);
        let mut log_scale = 0.0;
        for j in 1..=n {
            let jf = j as f64;
            let p3 = p2;
            p2 = p1;
            p1 = x * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            if p1.abs() > 1e100 {
                p1 *= 1e-100;
                p2 *= 1e-100;
                log_scale += 100.0 * std::f64::consts::LN_10;
            }
        }
        let derivative = (2.0 * n as f64).sqrt() * p2.abs();
        // Physicists' weight 2/p'², then divided by √π to normalize the Gaussian.
        std::f64::consts::LN_2
            - 2.0 * (derivative.ln() + log_scale - 0.25 * std::f64::consts::PI.ln())
            - 0.5 * std::f64::consts::PI.ln()
    };

    let mut roots: Vec<f64> = positive.iter().map(|r| -r).collect();
    if n % 2 == 1 {
        roots.push(0.0);
    }
    roots.extend(positive.iter().rev());

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for x in roots {
        let w = log_weight(x).exp();
        if w > 0.0 {
            nodes.push(std::f64::consts::SQRT_2 * x);
            weights.push(w);
        }
    }
    QuadratureRule {
        nodes,
        weights,
        order,
    }
}
