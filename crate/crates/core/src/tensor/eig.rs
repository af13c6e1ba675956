//! Dense Hermitian eigendecomposition.
//!
//! A cyclic Jacobi solver for complex Hermitian matrices. Every matrix in
//! this crate that reaches the solver is small (dimension <= 32), where
//! Jacobi is both simple and among the most accurate methods available.
//! Large matrices only arise as classical (diagonal) screen states, which
//! take a separate fast path in the density-operator layer.

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance on `max |A - A†|` for a matrix to count as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// Maximum absolute deviation from Hermiticity, `max_ij |a_ij - conj(a_ji)|`.
pub fn hermiticity_deviation(m: &ArrayView2<Complex64>) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        dev = dev.max(m[(i, i)].im.abs());
        for j in (i + 1)..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
///
/// Rejects non-square input and matrices that deviate from Hermiticity by
/// more than [`HERMITICITY_TOL`].
pub fn hermitian_eigenvalues(m: &ArrayView2<Complex64>) -> Result<Vec<f64>> {
    let (values, _) = hermitian_eigen(m)?;
    Ok(values)
}

/// Full eigendecomposition `(values, vectors)` with eigenvalues descending
/// and eigenvectors as the corresponding columns.
pub fn hermitian_eigen(m: &ArrayView2<Complex64>) -> Result<(Vec<f64>, Array2<Complex64>)> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            actual: m.ncols(),
        });
    }
    let dev = hermiticity_deviation(m);
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian { max_dev: dev });
    }

    let n = m.nrows();
    let mut a = m.to_owned();
    let mut v = Array2::<Complex64>::eye(n);

    let scale = frobenius_norm(&a).max(1.0);
    let target = 1e-15 * scale;

    let mut converged = false;
    let mut last_off = 0.0;
    for _sweep in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        last_off = off;
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            off_norm: last_off,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = Array2::<Complex64>::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    Ok((values, vectors))
}

/// One Jacobi rotation zeroing the (p, q) element of the Hermitian matrix.
///
/// The complex pivot is reduced to a real one by a phase on column q, then
/// the standard real Jacobi angle is applied. `A <- J† A J`, `V <- V J`.
fn rotate(a: &mut Array2<Complex64>, v: &mut Array2<Complex64>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{i phi}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // J columns: J[:,p] = c e_p - s conj_phase e_q, J[:,q] = s e_p + c conj_phase e_q
    let conj_phase = phase.conj();
    let n = a.nrows();

    // Column update: M = A J.
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * c - aiq * conj_phase * s;
        a[(i, q)] = aip * s + aiq * conj_phase * c;
    }
    // Row update: A' = J† M.
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = apj * c - aqj * phase * s;
        a[(q, j)] = apj * s + aqj * phase * c;
    }
    // Clean up roundoff on the pivot pair.
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * c - viq * conj_phase * s;
        v[(i, q)] = vip * s + viq * conj_phase * c;
    }
}

fn frobenius_norm(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn off_diagonal_norm(a: &Array2<Complex64>) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}
