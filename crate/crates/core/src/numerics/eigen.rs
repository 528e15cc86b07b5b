use nalgebra::{ComplexField, DMatrix};

use crate::error::{Error, Result};

/// Largest dimension accepted by [`sym_eig`]; every state in this crate lives in ≤ 8 dimensions.
pub const MAX_DIMENSION: usize = 8;

/// Eigendecomposition of a symmetric (or Hermitian) matrix, eigenvalues sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T: ComplexField<RealField = f64>> {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the unit eigenvector for `eigenvalues[k]`.
    pub eigenvectors: DMatrix<T>,
}

impl<T: ComplexField<RealField = f64>> Spectrum<T> {
    /// `Q f(Λ) Q†`, the spectral function of the decomposed matrix.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> DMatrix<T> {
        let q = &self.eigenvectors;
        let mut scaled = q.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let factor = T::from_real(f(lambda));
            scaled.column_mut(k).iter_mut().for_each(|v| *v *= factor.clone());
        }
        scaled * q.adjoint()
    }

    pub fn reconstruct(&self) -> DMatrix<T> {
        self.map(|x| x)
    }
}

/// Eigendecomposition of a real symmetric or complex Hermitian matrix.
///
/// Rejects inputs that are not square, exceed [`MAX_DIMENSION`], or deviate from
/// (Hermitian) symmetry by more than `1e-12 · max(1, ‖M‖)`.
pub fn sym_eig<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Result<Spectrum<T>> {
    if !m.is_square() {
        return Err(Error::Contract(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 || m.nrows() > MAX_DIMENSION {
        return Err(Error::Contract(format!(
            "matrix dimension {} is outside 1..={MAX_DIMENSION}",
            m.nrows()
        )));
    }
    let asymmetry = (m - m.adjoint()).norm();
    let scale = m.norm().max(1.0);
    if !(asymmetry <= 1e-12 * scale) {
        return Err(Error::Contract(format!(
            "matrix is not symmetric: ‖M − M†‖ = {asymmetry:e}"
        )));
    }
    let sym = (m + m.adjoint()) * T::from_real(0.5);
    let (values, vectors) = jacobi(sym);
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let eigenvalues = order.iter().map(|&k| values[k]).collect();
    let eigenvectors = DMatrix::from_fn(m.nrows(), m.nrows(), |i, j| vectors[(i, order[j])].clone());
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot `a_pq`, then applies the
/// real symmetric 2×2 rotation that zeroes it. Returns unsorted eigenvalues and
/// the accumulated unitary.
fn jacobi<T: ComplexField<RealField = f64>>(mut a: DMatrix<T>) -> (Vec<f64>, DMatrix<T>) {
    let n = a.nrows();
    let mut v = DMatrix::<T>::identity(n, n);
    let scale = a.norm();
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].clone().modulus_squared();
            }
        }
        if off.sqrt() <= f64::EPSILON * 1e-3 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[(p, q)].clone();
                let g_abs = g.clone().modulus();
                if g_abs == 0.0 {
                    continue;
                }
                let phase = g * T::from_real(1.0 / g_abs);
                let app = a[(p, p)].clone().real();
                let aqq = a[(q, q)].clone().real();
                let theta = (aqq - app) / (2.0 * g_abs);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // U restricted to (p, q): [[c, s], [−s·φ̄, c·φ̄]] with φ the pivot phase.
                let phase_bar = phase.conjugate();
                let u_pp = T::from_real(c);
                let u_pq = T::from_real(s);
                let u_qp = phase_bar.clone() * T::from_real(-s);
                let u_qq = phase_bar * T::from_real(c);
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)].clone(), a[(k, q)].clone());
                    a[(k, p)] = akp.clone() * u_pp.clone() + akq.clone() * u_qp.clone();
                    a[(k, q)] = akp * u_pq.clone() + akq * u_qq.clone();
                    let (vkp, vkq) = (v[(k, p)].clone(), v[(k, q)].clone());
                    v[(k, p)] = vkp.clone() * u_pp.clone() + vkq.clone() * u_qp.clone();
                    v[(k, q)] = vkp * u_pq.clone() + vkq * u_qq.clone();
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)].clone(), a[(q, k)].clone());
                    a[(p, k)] = u_pp.clone().conjugate() * apk.clone()
                        + u_qp.clone().conjugate() * aqk.clone();
                    a[(q, k)] = u_pq.clone().conjugate() * apk + u_qq.clone().conjugate() * aqk;
                }
                a[(p, q)] = T::zero();
                a[(q, p)] = T::zero();
                a[(p, p)] = T::from_real(a[(p, p)].clone().real());
                a[(q, q)] = T::from_real(a[(q, q)].clone().real());
            }
        }
    }
    ((0..n).map(|k| a[(k, k)].clone().real()).collect(), v)
}
