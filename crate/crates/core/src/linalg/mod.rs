//! Dense complex linear algebra: products, norms, commutators and the
//! Hermitian eigensolver.

mod eigen;
mod matrix;
mod state;

pub use eigen::{eig_hermitian, SpectralDecomposition, MAX_SWEEPS, OFF_DIAGONAL_THRESHOLD};
pub use matrix::ComplexMatrix;
pub use state::{vector_distance, vector_norm, StateVector};

use crate::error::Result;
use crate::scalar::Real;

/// Standard matrix product.
pub fn matmul<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    a.matmul(b)
}

/// `||A - A^H||_F <= tol`.
pub fn hermitian_check<T: Real>(a: &ComplexMatrix<T>, tol: T) -> bool {
    a.hermitian_deviation() <= tol
}

/// `[A, B] = AB - BA`.
pub fn commutator<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    ab.try_sub(&ba)
}

/// `AB + BA`.
pub fn anticommutator<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
) -> Result<ComplexMatrix<T>> {
    let ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    ab.try_add(&ba)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms<T> {
    pub frobenius: T,
    pub operator_2norm: T,
}

/// Frobenius norm and spectral norm.
pub fn norms<T: Real>(a: &ComplexMatrix<T>) -> Result<Norms<T>> {
    Ok(Norms {
        frobenius: a.frobenius_norm(),
        operator_2norm: operator_2norm(a)?,
    })
}

/// Largest singular value, from the top eigenvalue of `A^H A`.
pub fn operator_2norm<T: Real>(a: &ComplexMatrix<T>) -> Result<T> {
    // Pre-scaling keeps A^H A away from underflow for tiny error matrices.
    let scale = a.max_abs();
    if scale.is_zero() {
        return Ok(T::zero());
    }
    let scaled = a.scale_real(T::one() / scale);
    let gram = &scaled.adjoint() * &scaled;
    let spectrum = eig_hermitian(&gram)?;
    let top = spectrum
        .eigenvalues
        .last()
        .copied()
        .unwrap_or_else(T::zero)
        .max(T::zero());
    Ok(top.sqrt() * scale)
}
