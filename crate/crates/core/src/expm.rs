//! Matrix exponentials: exact via the spectral decomposition, and a truncated
//! Taylor series with scaling and squaring that serves as an independent
//! oracle (it never touches the eigensolver).
//!
//! Natural units throughout: `U(t) = e^{-iHt}` with ħ = 1.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, StateVector};
use crate::scalar::{phase, Real};

/// Off-diagonal magnitude below which `exact_expm` takes the diagonal path.
pub const DIAGONAL_FAST_PATH_TOL: f64 = 1e-14;

/// Scaled-level Frobenius bound for `taylor_expm`.
pub const TAYLOR_SCALING_THRESHOLD: f64 = 0.5;

/// Series length used when callers have no preference.
pub const DEFAULT_TAYLOR_TERMS: usize = 20;

/// Unitary propagator together with where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator<T: Real> {
    pub matrix: ComplexMatrix<T>,
    pub generator_label: Option<String>,
    pub time: T,
}

impl<T: Real> UnitaryOperator<T> {
    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
            generator_label: None,
            time: T::zero(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.generator_label = Some(label.into());
        self
    }

    /// `||U^H U - I||_F`.
    pub fn unitarity_deviation(&self) -> T {
        self.matrix.unitarity_deviation()
    }

    /// Composition `self · other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.matmul(&other.matrix)?,
            generator_label: None,
            time: self.time + other.time,
        })
    }
}

/// `e^{-iHt}` by diagonalization; diagonal inputs skip the eigensolver.
pub fn exact_expm<T: Real>(h: &ComplexMatrix<T>, t: T) -> Result<UnitaryOperator<T>> {
    if !t.is_finite() {
        return Err(Error::NonFinite("evolution time"));
    }
    let tol = T::tolerance(1e-10) * h.frobenius_norm();
    let deviation = h.hermitian_deviation();
    if deviation > tol {
        return Err(Error::NotHermitian {
            deviation: deviation.to_f64_lossy(),
            tolerance: tol.to_f64_lossy(),
        });
    }
    let matrix = if h.max_off_diagonal() <= T::lit(DIAGONAL_FAST_PATH_TOL) {
        let diag: Vec<Complex<T>> = h.diagonal().iter().map(|e| phase(e.re * t)).collect();
        ComplexMatrix::from_diagonal(&diag)
    } else {
        eig_hermitian(h)?.apply_function(|e| phase(e * t))
    };
    Ok(UnitaryOperator {
        matrix,
        generator_label: None,
        time: t,
    })
}

/// Number of squarings `m = max(0, ceil(log2(||A||_F / 0.5)))`.
pub fn taylor_squarings<T: Real>(a: &ComplexMatrix<T>) -> u32 {
    let norm = a.frobenius_norm().to_f64_lossy();
    if norm <= TAYLOR_SCALING_THRESHOLD {
        return 0;
    }
    (norm / TAYLOR_SCALING_THRESHOLD).log2().ceil().max(0.0) as u32
}

/// `e^A` for a general square `A`: the first `terms` Taylor terms of
/// `e^{A / 2^m}`, squared `m` times.
pub fn taylor_expm<T: Real>(a: &ComplexMatrix<T>, terms: usize) -> Result<ComplexMatrix<T>> {
    if terms == 0 {
        return Err(Error::InvalidArgument("taylor_expm needs at least one term".into()));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite("taylor_expm input"));
    }
    let squarings = taylor_squarings(a);
    let scaled = a.scale_real(T::lit(0.5f64.powi(squarings as i32)));
    let n = a.dim();

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..terms {
        term = (&term * &scaled).scale_real(T::one() / T::from_count(k));
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
        if !sum.is_finite() {
            return Err(Error::Overflow("taylor_expm squaring"));
        }
    }
    if !sum.is_finite() {
        return Err(Error::Overflow("taylor_expm series"));
    }
    Ok(sum)
}

/// `e^{-iHt}` through the Taylor oracle.
pub fn taylor_propagator<T: Real>(h: &ComplexMatrix<T>, t: T, terms: usize) -> Result<ComplexMatrix<T>> {
    let generator = h.scale(Complex::new(T::zero(), -t));
    taylor_expm(&generator, terms)
}

/// `U |ψ>`.
pub fn evolve_state<T: Real>(u: &UnitaryOperator<T>, psi: &StateVector<T>) -> Result<StateVector<T>> {
    StateVector::from_amplitudes(u.matrix.apply(psi.amplitudes())?)
}

/// `<ψ|H|ψ>` (real for Hermitian `H`).
pub fn expectation<T: Real>(h: &ComplexMatrix<T>, psi: &StateVector<T>) -> Result<T> {
    let h_psi = h.apply(psi.amplitudes())?;
    let value = psi
        .amplitudes()
        .iter()
        .zip(&h_psi)
        .fold(Complex::<T>::zero(), |acc, (a, b)| acc + a.conj() * b);
    Ok(value.re)
}
