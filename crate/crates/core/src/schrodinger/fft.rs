//! Power-of-two discrete Fourier transforms.
//!
//! Forward: `X_k = Σ_j x_j e^{-2πi jk/N}` (unnormalized).
//! Inverse: `x_j = (1/N) Σ_k X_k e^{2πi jk/N}`.

use num_complex::Complex;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Real;

fn check_length(len: usize) -> Result<()> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "FFT length {len} is not a power of two"
        )));
    }
    Ok(())
}

/// Forward and inverse plans for one length, reusable across steps.
#[derive(Clone)]
pub struct FftPair<T: Real> {
    len: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> FftPair<T> {
    pub fn new(len: usize) -> Result<Self> {
        check_length(len)?;
        let mut planner = FftPlanner::new();
        Ok(Self {
            len,
            forward: planner.plan_fft(len, FftDirection::Forward),
            inverse: planner.plan_fft(len, FftDirection::Inverse),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward_in_place(&self, buf: &mut [Complex<T>]) -> Result<()> {
        self.check(buf)?;
        self.forward.process(buf);
        Ok(())
    }

    pub fn inverse_in_place(&self, buf: &mut [Complex<T>]) -> Result<()> {
        self.check(buf)?;
        self.inverse.process(buf);
        let scale = T::one() / T::from_count(self.len);
        for z in buf.iter_mut() {
            *z = *z * scale;
        }
        Ok(())
    }

    fn check(&self, buf: &[Complex<T>]) -> Result<()> {
        if buf.len() != self.len {
            return Err(Error::DimensionMismatch {
                expected: self.len,
                found: buf.len(),
            });
        }
        Ok(())
    }
}

impl<T: Real> std::fmt::Debug for FftPair<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftPair").field("len", &self.len).finish()
    }
}

pub fn fft<T: Real>(values: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let plan = FftPair::new(values.len())?;
    let mut buf = values.to_vec();
    plan.forward_in_place(&mut buf)?;
    Ok(buf)
}

pub fn ifft<T: Real>(values: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let plan = FftPair::new(values.len())?;
    let mut buf = values.to_vec();
    plan.inverse_in_place(&mut buf)?;
    Ok(buf)
}
