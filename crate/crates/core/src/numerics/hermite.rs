use crate::error::{Error, Result};

/// Default cap on the Hermite index. Mode populations beyond it sit below the
/// smallest representable double at every separation of interest.
pub const DEFAULT_Q_MAX: usize = 64;

/// Physicists' Hermite polynomial `H_q(x)` from the three-term recurrence,
/// with the index capped at [`DEFAULT_Q_MAX`].
pub fn hermite_polynomial(q: usize, x: f64) -> Result<f64> {
    hermite_polynomial_capped(q, x, DEFAULT_Q_MAX)
}

pub fn hermite_polynomial_capped(q: usize, x: f64, q_max: usize) -> Result<f64> {
    if q > q_max {
        return Err(Error::Domain(format!(
            "Hermite index {q} exceeds the configured maximum {q_max}"
        )));
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..q {
        // H_{k+1} = 2x H_k − 2k H_{k−1}
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}
