use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Periodic 1D grid `x_j = x_min + j·dx`, `j = 0..points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T: Real> {
    points: usize,
    x_min: T,
    x_max: T,
    mass: T,
}

impl<T: Real> GridSpec<T> {
    pub fn new(points: usize, x_min: T, x_max: T, mass: T) -> Result<Self> {
        if points == 0 || !points.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "grid points {points} must be a positive power of two"
            )));
        }
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::InvalidArgument("grid requires x_max > x_min".into()));
        }
        if !mass.is_finite() || mass <= T::zero() {
            return Err(Error::InvalidArgument("mass must be positive".into()));
        }
        Ok(Self {
            points,
            x_min,
            x_max,
            mass,
        })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn x_min(&self) -> T {
        self.x_min
    }

    pub fn x_max(&self) -> T {
        self.x_max
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    pub fn length(&self) -> T {
        self.x_max - self.x_min
    }

    pub fn spacing(&self) -> T {
        self.length() / T::from_count(self.points)
    }

    pub fn x(&self, j: usize) -> T {
        self.x_min + T::from_count(j) * self.spacing()
    }

    pub fn positions(&self) -> Vec<T> {
        (0..self.points).map(|j| self.x(j)).collect()
    }

    /// Signed FFT frequency index: `0..N/2-1` then `-N/2..-1`.
    pub fn frequency(&self, j: usize) -> i64 {
        let n = self.points as i64;
        let j = j as i64;
        if j < n / 2 {
            j
        } else {
            j - n
        }
    }

    /// `k_j = 2π f_j / L` in FFT order.
    pub fn wavenumbers(&self) -> Vec<T> {
        let two_pi_over_l = T::TAU() / self.length();
        (0..self.points)
            .map(|j| T::from_i64(self.frequency(j)).expect("frequency") * two_pi_over_l)
            .collect()
    }

    /// `k_j² / 2m` in FFT order.
    pub fn kinetic_energies(&self) -> Vec<T> {
        let two_m = self.mass + self.mass;
        self.wavenumbers().into_iter().map(|k| k * k / two_m).collect()
    }
}

/// Grid wavefunction normalized so `Σ |ψ_j|² dx = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction<T: Real> {
    grid: GridSpec<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> WaveFunction<T> {
    /// Normalizes `values` on `grid`.
    pub fn new(grid: GridSpec<T>, values: Vec<Complex<T>>) -> Result<Self> {
        let mut psi = Self::from_raw(grid, values)?;
        let norm = psi.norm();
        if norm.is_zero() {
            return Err(Error::InvalidArgument("cannot normalize a zero wavefunction".into()));
        }
        let scale = T::one() / norm.sqrt();
        for z in &mut psi.values {
            *z = *z * scale;
        }
        Ok(psi)
    }

    /// Wraps values without renormalizing.
    pub fn from_raw(grid: GridSpec<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.points() {
            return Err(Error::DimensionMismatch {
                expected: grid.points(),
                found: values.len(),
            });
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("wavefunction values"));
        }
        Ok(Self { grid, values })
    }

    /// `ψ(x) ∝ exp(-(x - x0)² / (4σ²) + i p0 x)`.
    pub fn gaussian(grid: GridSpec<T>, x0: T, sigma: T, p0: T) -> Result<Self> {
        if !sigma.is_finite() || sigma <= T::zero() {
            return Err(Error::InvalidArgument("Gaussian width must be positive".into()));
        }
        let four_var = T::lit(4.0) * sigma * sigma;
        let values = grid
            .positions()
            .into_iter()
            .map(|x| {
                let d = x - x0;
                Complex::from_polar((-(d * d) / four_var).exp(), p0 * x)
            })
            .collect();
        Self::new(grid, values)
    }

    /// `e^{i k x}` with `k = 2π·mode / L`.
    pub fn plane_wave(grid: GridSpec<T>, mode: i64) -> Result<Self> {
        let k = T::TAU() * T::from_i64(mode).expect("mode") / grid.length();
        let values = grid
            .positions()
            .into_iter()
            .map(|x| Complex::from_polar(T::one(), k * x))
            .collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    /// `Σ |ψ_j|² dx`.
    pub fn norm(&self) -> T {
        self.values.iter().map(|z| z.norm_sqr()).sum::<T>() * self.grid.spacing()
    }

    /// L² distance `sqrt(Σ |ψ_j - φ_j|² dx)`.
    pub fn distance(&self, other: &Self) -> Result<T> {
        if self.values.len() != other.values.len() {
            return Err(Error::DimensionMismatch {
                expected: self.values.len(),
                found: other.values.len(),
            });
        }
        let sum: T = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((sum * self.grid.spacing()).sqrt())
    }

    /// Values scaled to unit Euclidean norm, `ψ_j · sqrt(dx)`.
    pub fn as_unit_vector(&self) -> Vec<Complex<T>> {
        let s = self.grid.spacing().sqrt();
        self.values.iter().map(|z| z * s).collect()
    }
}
