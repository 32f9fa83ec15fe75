use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Complex state vector. Constructors that promise a physical state
/// normalize; `from_amplitudes` keeps the caller's scaling.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn from_amplitudes(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("state vector must be nonempty".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        Ok(Self { amplitudes })
    }

    /// Builds and normalizes to unit 2-norm.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        Self::from_amplitudes(amplitudes)?.normalize()
    }

    /// Standard basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![Complex::zero(); dim];
        amplitudes[index] = Complex::one();
        Self::from_amplitudes(amplitudes)
    }

    pub fn normalize(mut self) -> Result<Self> {
        let norm = self.norm();
        if norm.is_zero() {
            return Err(Error::InvalidArgument("cannot normalize the zero vector".into()));
        }
        for z in &mut self.amplitudes {
            *z = *z / norm;
        }
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    pub fn norm(&self) -> T {
        vector_norm(&self.amplitudes)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b))
    }

    /// `||self - other||_2`.
    pub fn distance(&self, other: &Self) -> Result<T> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(vector_distance(&self.amplitudes, &other.amplitudes))
    }
}

pub fn vector_norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

pub fn vector_distance<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<T>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn normalize_gives_unit_norm() {
        let s = StateVector::normalized(vec![c(3.0f64, 0.0), c(0.0, 4.0)]).unwrap();
        assert!((s.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn zero_vector_cannot_normalize() {
        assert!(StateVector::<f64>::normalized(vec![Complex::zero(); 3]).is_err());
    }

    #[test]
    fn basis_out_of_range() {
        assert!(StateVector::<f64>::basis(2, 2).is_err());
    }
}
