//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the classical real Jacobi rotation, so the
//! combined transform `J = P R` zeroes `a_pq` while keeping `A` Hermitian.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{cr, Real};

/// Maximum number of full sweeps over the upper triangle.
pub const MAX_SWEEPS: usize = 100;

/// Off-diagonal Frobenius threshold relative to `||A||_F`.
pub const OFF_DIAGONAL_THRESHOLD: f64 = 1e-12;

/// `A = U diag(eigenvalues) U^H` with ascending eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition<T: Real> {
    pub eigenvalues: Vec<T>,
    /// Columns are the orthonormal eigenvectors.
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U f(D) U^H` for a complex function of the eigenvalues.
    pub fn apply_function(&self, f: impl Fn(T) -> Complex<T>) -> ComplexMatrix<T> {
        let n = self.dim();
        let u = &self.eigenvectors;
        let values: Vec<Complex<T>> = self.eigenvalues.iter().map(|&e| f(e)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex::zero();
                for (k, &fk) in values.iter().enumerate() {
                    acc = acc + u[(i, k)] * fk * u[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// `U diag(eigenvalues) U^H`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.apply_function(cr)
    }

    /// Orthogonal projector onto the eigenspace of eigenvalues within `tol`
    /// of `value`. Used to compare degenerate spectra basis-independently.
    pub fn projector(&self, value: T, tol: T) -> ComplexMatrix<T> {
        self.apply_function(|e| {
            if (e - value).abs() <= tol {
                cr(T::one())
            } else {
                Complex::zero()
            }
        })
    }
}

/// Diagonalizes a Hermitian matrix with cyclic Jacobi rotations.
pub fn eig_hermitian<T: Real>(a: &ComplexMatrix<T>) -> Result<SpectralDecomposition<T>> {
    let n = a.dim();
    let scale = a.frobenius_norm();
    let herm_tol = T::tolerance(1e-10) * scale;
    let deviation = a.hermitian_deviation();
    if deviation > herm_tol {
        return Err(Error::NotHermitian {
            deviation: deviation.to_f64_lossy(),
            tolerance: herm_tol.to_f64_lossy(),
        });
    }

    // Work on the exactly Hermitian part so rounding in the input cannot
    // leak anti-Hermitian components into the rotations.
    let mut work = ComplexMatrix::zeros(n);
    let half = T::lit(0.5);
    for i in 0..n {
        for j in 0..n {
            work[(i, j)] = (a[(i, j)] + a[(j, i)].conj()) * half;
        }
        work[(i, i)] = cr(work[(i, i)].re);
    }
    let mut vectors = ComplexMatrix::identity(n);
    let threshold = T::tolerance(OFF_DIAGONAL_THRESHOLD) * scale;

    let mut sweeps = 0;
    loop {
        let off = work.off_diagonal_norm();
        if off <= threshold || off.is_zero() {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off.to_f64_lossy(),
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut work, &mut vectors, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| work[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[(row, new_col)] = vectors[(row, old_col)];
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r.is_zero() {
        return;
    }
    let n = a.dim();
    // e^{iφ} = a_pq / |a_pq|
    let e_phi = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let two = T::lit(2.0);
    let theta = (two * r).atan2(aqq - app) / two;
    let (s, c) = theta.sin_cos();
    let e_mphi = e_phi.conj();

    // A <- A J with J = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] on columns p, q.
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * e_mphi * s;
        a[(k, q)] = akp * s + akq * e_mphi * c;
    }
    // A <- J^H A on rows p, q.
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * e_phi * s;
        a[(q, k)] = apk * s + aqk * e_phi * c;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = cr(a[(p, p)].re);
    a[(q, q)] = cr(a[(q, q)].re);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * e_mphi * s;
        v[(k, q)] = vkp * s + vkq * e_mphi * c;
    }
}
