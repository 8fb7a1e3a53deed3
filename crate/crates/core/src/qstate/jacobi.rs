//! Cyclic Jacobi diagonalisation for small dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a[p][q]` with a
//! diagonal unitary and then applies a real plane rotation that zeroes it.
//! Sweeps repeat until the off-diagonal Frobenius norm drops below
//! `1e-13 * max(1, ||A||_F)`.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ONE, ZERO};
use crate::error::{Error, Result};

const OFF_DIAGONAL_TOLERANCE: f64 = 1e-13;
const MAX_SWEEPS: usize = 64;

/// Input Hermiticity tolerance accepted by the public entry points.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Eigen-decomposition `A = V diag(values) V^dagger`, values ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are the eigenvectors, row-major `n x n`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        let mut out = ComplexMatrix::zeros_unchecked(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for (k, &lambda) in self.values.iter().enumerate() {
                    acc += v[(i, k)] * lambda * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let (values, _) = jacobi(m.dim(), m.entries().to_vec(), false)?;
    Ok(values)
}

/// Ascending eigenvalues together with the unitary of eigenvectors.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    let n = m.dim();
    let (values, vectors) = jacobi(n, m.entries().to_vec(), true)?;
    Ok(HermitianEigen {
        values,
        vectors: ComplexMatrix::from_parts_unchecked(n, vectors.expect("vectors requested")),
    })
}

/// Ascending eigenvalues of a real symmetric 3x3 matrix.
pub fn symmetric3_eigenvalues(m: &[[f64; 3]; 3]) -> Result<[f64; 3]> {
    let dev = (0..3)
        .flat_map(|i| (0..3).map(move |j| (m[i][j] - m[j][i]).abs()))
        .fold(0.0_f64, f64::max);
    if dev > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian(dev));
    }
    let entries = m
        .iter()
        .flatten()
        .map(|&x| Complex64::new(x, 0.0))
        .collect();
    let (values, _) = jacobi(3, entries, false)?;
    Ok([values[0], values[1], values[2]])
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOLERANCE {
        Err(Error::NotHermitian(dev))
    } else {
        Ok(())
    }
}

fn off_diagonal_norm(n: usize, a: &[Complex64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i * n + j].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

pub(crate) fn jacobi(
    n: usize,
    mut a: Vec<Complex64>,
    want_vectors: bool,
) -> Result<(Vec<f64>, Option<Vec<Complex64>>)> {
    // Symmetrise so that rounding in the input cannot bias the rotations.
    for i in 0..n {
        a[i * n + i] = Complex64::new(a[i * n + i].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[i * n + j] + a[j * n + i].conj()) * 0.5;
            a[i * n + j] = avg;
            a[j * n + i] = avg.conj();
        }
    }
    let mut v = want_vectors.then(|| {
        let mut v = vec![ZERO; n * n];
        for i in 0..n {
            v[i * n + i] = ONE;
        }
        v
    });

    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    let threshold = OFF_DIAGONAL_TOLERANCE * scale;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(n, &a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(n, &mut a, v.as_deref_mut(), p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(n, &a) > threshold {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = v.map(|v| {
        let mut sorted = vec![ZERO; n * n];
        for (new_col, &old_col) in order.iter().enumerate() {
            for row in 0..n {
                sorted[row * n + new_col] = v[row * n + old_col];
            }
        }
        sorted
    });
    Ok((values, vectors))
}

fn rotate(n: usize, a: &mut [Complex64], v: Option<&mut [Complex64]>, p: usize, q: usize) {
    let apq = a[p * n + q];
    let modulus = apq.norm();
    if modulus < 1e-300 {
        return;
    }
    let phase = apq / modulus;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;

    let theta = (aqq - app) / (2.0 * modulus);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = D G with D = diag(1, conj(phase)) on (p, q) and G the real rotation.
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    // A <- A J
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * jpp + akq * jqp;
        a[k * n + q] = akp * jpq + akq * jqq;
    }
    // A <- J^dagger A
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = jpp.conj() * apk + jqp.conj() * aqk;
        a[q * n + k] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
    a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[k * n + p];
            let vkq = v[k * n + q];
            v[k * n + p] = vkp * jpp + vkq * jqp;
            v[k * n + q] = vkp * jpq + vkq * jqq;
        }
    }
}
