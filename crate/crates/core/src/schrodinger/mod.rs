//! Split-step Fourier evolution of `H = p²/2m + V(x)` on a periodic grid.
//!
//! The kinetic factor `e^{-i dt p²/2m}` is diagonal in momentum space and is
//! applied between a forward and an inverse FFT; the potential factor
//! `e^{-i dt V(x)}` is a pointwise phase. Each step applies the potential
//! phase first and the kinetic propagator second, i.e. the matrix product
//! `e^{-i dt K} e^{-i dt V}` with `K` as the first part of the split.
//!
//! Wavenumbers use the usual FFT ordering, `k_j = 2π f_j / L` with
//! `f = 0, 1, …, N/2 - 1, -N/2, …, -1`.

mod fft;
mod grid;

use std::str::FromStr;

use num_complex::Complex;
use num_traits::Zero;

pub use fft::{fft, ifft, FftPair};
pub use grid::{GridSpec, WaveFunction};

use crate::error::{Error, Result};
use crate::hamiltonians::build_diagonal;
use crate::linalg::ComplexMatrix;
use crate::scalar::{phase, Real};
use crate::trotter::SplitHamiltonian;

/// Named potentials selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialPreset {
    /// `V(x) = 0`.
    Free,
    /// `V(x) = x`, constant force `-1`.
    Linear,
}

impl PotentialPreset {
    pub fn sample<T: Real>(self, grid: &GridSpec<T>) -> Vec<T> {
        match self {
            PotentialPreset::Free => vec![T::zero(); grid.points()],
            PotentialPreset::Linear => grid.positions(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PotentialPreset::Free => "free",
            PotentialPreset::Linear => "linear",
        }
    }
}

impl FromStr for PotentialPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(PotentialPreset::Free),
            "linear" => Ok(PotentialPreset::Linear),
            other => Err(Error::Parse(format!("unknown potential preset {other:?}"))),
        }
    }
}

/// Reusable split-step propagator for a fixed grid, potential and `dt`.
#[derive(Debug, Clone)]
pub struct SplitStepPropagator<T: Real> {
    grid: GridSpec<T>,
    plans: FftPair<T>,
    kinetic_phase: Vec<Complex<T>>,
    potential_phase: Vec<Complex<T>>,
}

impl<T: Real> SplitStepPropagator<T> {
    pub fn new(grid: GridSpec<T>, v: &[T], dt: T) -> Result<Self> {
        check_potential(&grid, v)?;
        Ok(Self {
            plans: FftPair::new(grid.points())?,
            kinetic_phase: kinetic_phases(&grid, dt),
            potential_phase: v.iter().map(|&vj| phase(vj * dt)).collect(),
            grid,
        })
    }

    fn check_grid(&self, psi: &WaveFunction<T>) -> Result<()> {
        if psi.grid() != &self.grid {
            return Err(Error::InvalidArgument(
                "wavefunction grid differs from propagator grid".into(),
            ));
        }
        Ok(())
    }

    pub fn kinetic_in_place(&self, psi: &mut WaveFunction<T>) -> Result<()> {
        self.check_grid(psi)?;
        let buf = psi.values_mut();
        self.plans.forward_in_place(buf)?;
        for (z, &p) in buf.iter_mut().zip(&self.kinetic_phase) {
            *z = *z * p;
        }
        self.plans.inverse_in_place(buf)
    }

    pub fn potential_in_place(&self, psi: &mut WaveFunction<T>) -> Result<()> {
        self.check_grid(psi)?;
        for (z, &p) in psi.values_mut().iter_mut().zip(&self.potential_phase) {
            *z = *z * p;
        }
        Ok(())
    }

    /// Potential phase, then kinetic propagator.
    pub fn step_in_place(&self, psi: &mut WaveFunction<T>) -> Result<()> {
        self.potential_in_place(psi)?;
        self.kinetic_in_place(psi)
    }
}

fn check_potential<T: Real>(grid: &GridSpec<T>, v: &[T]) -> Result<()> {
    if v.len() != grid.points() {
        return Err(Error::DimensionMismatch {
            expected: grid.points(),
            found: v.len(),
        });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("potential"));
    }
    Ok(())
}

fn kinetic_phases<T: Real>(grid: &GridSpec<T>, dt: T) -> Vec<Complex<T>> {
    grid.kinetic_energies()
        .into_iter()
        .map(|e| phase(e * dt))
        .collect()
}

/// `ψ <- IFFT(e^{-i dt k²/2m} FFT(ψ))`.
pub fn kinetic_step<T: Real>(psi: &WaveFunction<T>, dt: T) -> Result<WaveFunction<T>> {
    let grid = *psi.grid();
    let plans = FftPair::new(grid.points())?;
    let mut buf = psi.values().to_vec();
    plans.forward_in_place(&mut buf)?;
    for (z, p) in buf.iter_mut().zip(kinetic_phases(&grid, dt)) {
        *z = *z * p;
    }
    plans.inverse_in_place(&mut buf)?;
    WaveFunction::from_raw(grid, buf)
}

/// `ψ_j <- e^{-i dt V(x_j)} ψ_j`.
pub fn potential_step<T: Real>(psi: &WaveFunction<T>, v: &[T], dt: T) -> Result<WaveFunction<T>> {
    check_potential(psi.grid(), v)?;
    let values = psi
        .values()
        .iter()
        .zip(v)
        .map(|(&z, &vj)| z * phase(vj * dt))
        .collect();
    WaveFunction::from_raw(*psi.grid(), values)
}

/// `n_steps` first-order split steps of size `t / n_steps`.
pub fn split_step_evolve<T: Real>(
    psi: &WaveFunction<T>,
    v: &[T],
    t: T,
    n_steps: usize,
) -> Result<WaveFunction<T>> {
    if n_steps == 0 {
        return Err(Error::InvalidArgument("n_steps must be at least 1".into()));
    }
    let dt = t / T::from_count(n_steps);
    let prop = SplitStepPropagator::new(*psi.grid(), v, dt)?;
    let mut out = psi.clone();
    for _ in 0..n_steps {
        prop.step_in_place(&mut out)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables<T> {
    pub norm: T,
    pub mean_x: T,
    pub mean_p: T,
    pub energy_kinetic: T,
}

/// Norm, `<x>`, `<p>` and `<p²/2m>` on the grid. Momentum moments use
/// Parseval: `Σ f(k_j) |ψ̂_j|² · dx / N`.
pub fn observables<T: Real>(psi: &WaveFunction<T>) -> Result<Observables<T>> {
    let grid = psi.grid();
    let dx = grid.spacing();
    let mut norm = T::zero();
    let mut mean_x = T::zero();
    for (j, z) in psi.values().iter().enumerate() {
        let w = z.norm_sqr();
        norm = norm + w;
        mean_x = mean_x + grid.x(j) * w;
    }
    let spectrum = fft(psi.values())?;
    let weight = dx / T::from_count(grid.points());
    let ks = grid.wavenumbers();
    let two_m = grid.mass() + grid.mass();
    let mut mean_p = T::zero();
    let mut energy = T::zero();
    for (z, &k) in spectrum.iter().zip(&ks) {
        let w = z.norm_sqr();
        mean_p = mean_p + k * w;
        energy = energy + k * k / two_m * w;
    }
    Ok(Observables {
        norm: norm * dx,
        mean_x: mean_x * dx,
        mean_p: mean_p * weight,
        energy_kinetic: energy * weight,
    })
}

/// `Σ (x_j - <x>)² |ψ_j|² dx / norm`.
pub fn position_variance<T: Real>(psi: &WaveFunction<T>) -> T {
    let grid = psi.grid();
    let weights: Vec<T> = psi.values().iter().map(|z| z.norm_sqr()).collect();
    let total: T = weights.iter().copied().sum();
    let mean = weights
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (j, &w)| acc + grid.x(j) * w)
        / total;
    weights.iter().enumerate().fold(T::zero(), |acc, (j, &w)| {
        let d = grid.x(j) - mean;
        acc + d * d * w
    }) / total
}

/// Dense spectral kinetic matrix
/// `K_{jl} = (1/N) Σ_m e^{2πi m (j - l)/N} k_m² / 2m`.
pub fn dense_kinetic_matrix<T: Real>(grid: &GridSpec<T>) -> ComplexMatrix<T> {
    let n = grid.points();
    let energies = grid.kinetic_energies();
    let inv_n = T::one() / T::from_count(n);
    // K depends only on (j - l) mod N.
    let column: Vec<Complex<T>> = (0..n)
        .map(|d| {
            energies.iter().enumerate().fold(Complex::zero(), |acc, (m, &e)| {
                let angle = T::TAU() * T::from_count((m * d) % n) * inv_n;
                acc + Complex::from_polar(e, angle)
            }) * inv_n
        })
        .collect();
    let mut k = ComplexMatrix::zeros(n);
    for j in 0..n {
        for l in j..n {
            let v = column[(j + n - l) % n];
            k[(j, l)] = v;
            k[(l, j)] = v.conj();
        }
        k[(j, j)] = Complex::new(k[(j, j)].re, T::zero());
    }
    k
}

/// `(S, T) = (K, diag(V))` for the grid, matching the split-step ordering.
pub fn grid_split_hamiltonian<T: Real>(grid: &GridSpec<T>, v: &[T]) -> Result<SplitHamiltonian<T>> {
    check_potential(grid, v)?;
    SplitHamiltonian::new(dense_kinetic_matrix(grid), build_diagonal(v)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow<T> {
    pub step: usize,
    pub time: T,
    pub observables: Observables<T>,
}

#[derive(Debug, Clone)]
pub struct Trajectory<T: Real> {
    pub rows: Vec<TrajectoryRow<T>>,
    /// `(step, state)` pairs at the snapshot stride.
    pub snapshots: Vec<(usize, WaveFunction<T>)>,
    pub final_state: WaveFunction<T>,
}

/// Runs `split_step_evolve` while recording observables every
/// `record_stride` steps (plus the first and last step) and full states every
/// `snapshot_stride` steps when requested.
pub fn split_step_trajectory<T: Real>(
    psi: &WaveFunction<T>,
    v: &[T],
    t: T,
    n_steps: usize,
    record_stride: usize,
    snapshot_stride: Option<usize>,
) -> Result<Trajectory<T>> {
    if n_steps == 0 {
        return Err(Error::InvalidArgument("n_steps must be at least 1".into()));
    }
    if record_stride == 0 || snapshot_stride == Some(0) {
        return Err(Error::InvalidArgument("strides must be positive".into()));
    }
    let dt = t / T::from_count(n_steps);
    let prop = SplitStepPropagator::new(*psi.grid(), v, dt)?;
    let mut state = psi.clone();
    let mut rows = Vec::new();
    let mut snapshots = Vec::new();
    for step in 0..=n_steps {
        if step > 0 {
            prop.step_in_place(&mut state)?;
        }
        if step % record_stride == 0 || step == n_steps {
            rows.push(TrajectoryRow {
                step,
                time: dt * T::from_count(step),
                observables: observables(&state)?,
            });
        }
        if let Some(stride) = snapshot_stride {
            if step % stride == 0 || step == n_steps {
                snapshots.push((step, state.clone()));
            }
        }
    }
    Ok(Trajectory {
        rows,
        snapshots,
        final_state: state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec<f64> {
        GridSpec::new(256, -20.0, 20.0, 1.0).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(100, -1.0f64, 1.0, 1.0).is_err());
        assert!(GridSpec::new(64, 1.0f64, 1.0, 1.0).is_err());
        assert!(GridSpec::new(64, -1.0f64, 1.0, 0.0).is_err());
        let g = GridSpec::new(8, 0.0f64, 8.0, 1.0).unwrap();
        assert_eq!(g.spacing(), 1.0);
        let f: Vec<i64> = (0..8).map(|j| g.frequency(j)).collect();
        assert_eq!(f, vec![0, 1, 2, 3, -4, -3, -2, -1]);
    }

    #[test]
    fn constructed_wavefunctions_are_normalized() {
        let g = grid();
        for psi in [
            WaveFunction::gaussian(g, 0.0, 1.0, 0.0).unwrap(),
            WaveFunction::gaussian(g, 2.0, 0.7, -1.5).unwrap(),
            WaveFunction::plane_wave(g, 3).unwrap(),
        ] {
            assert!((observables(&psi).unwrap().norm - 1.0).abs() <= 1e-10);
        }
        assert!(WaveFunction::new(g, vec![Complex::zero(); 256]).is_err());
        assert!(WaveFunction::gaussian(g, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn symmetric_gaussian_observables() {
        let psi = WaveFunction::gaussian(grid(), 0.0, 1.0, 0.0).unwrap();
        let obs = observables(&psi).unwrap();
        assert!(obs.mean_x.abs() <= 1e-10);
        assert!(obs.mean_p.abs() <= 1e-10);
        // <p²>/2m = 1 / (8 σ² m) for this packet.
        assert!((obs.energy_kinetic - 0.125).abs() < 1e-10);
    }

    #[test]
    fn boosted_gaussian_momentum() {
        let psi = WaveFunction::gaussian(grid(), 0.0, 1.0, 1.3).unwrap();
        assert!((observables(&psi).unwrap().mean_p - 1.3).abs() <= 1e-6);
    }

    #[test]
    fn zero_dt_and_zero_potential_are_identity() {
        let psi = WaveFunction::gaussian(grid(), 0.5, 1.0, 0.3).unwrap();
        let k = kinetic_step(&psi, 0.0).unwrap();
        assert!(k.distance(&psi).unwrap() < 1e-14);
        let v0 = vec![0.0; 256];
        let p = potential_step(&psi, &v0, 0.4).unwrap();
        assert_eq!(p, psi);
        let e = split_step_evolve(&psi, &v0, 0.0, 5).unwrap();
        assert!(e.distance(&psi).unwrap() < 1e-14);
    }

    #[test]
    fn constant_potential_is_global_phase() {
        let psi = WaveFunction::gaussian(grid(), 0.0, 1.0, 0.0).unwrap();
        let v = vec![2.5; 256];
        let out = potential_step(&psi, &v, 0.2).unwrap();
        let expected = Complex::new(0.0, -2.5 * 0.2).exp();
        for (a, b) in out.values().iter().zip(psi.values()) {
            assert!((a - b * expected).norm() < 1e-15);
        }
    }

    #[test]
    fn potential_step_preserves_moduli_and_checks_length() {
        let g = grid();
        let psi = WaveFunction::gaussian(g, 0.0, 1.0, 0.0).unwrap();
        let v = PotentialPreset::Linear.sample(&g);
        let out = potential_step(&psi, &v, 0.3).unwrap();
        for (a, b) in out.values().iter().zip(psi.values()) {
            assert!((a.norm() - b.norm()).abs() <= 1e-15 * b.norm());
        }
        assert!(potential_step(&psi, &v[..10], 0.3).is_err());
    }

    #[test]
    fn plane_wave_acquires_kinetic_phase() {
        let g = grid();
        let mode = 5;
        let psi = WaveFunction::plane_wave(g, mode).unwrap();
        let dt = 0.37;
        let k = std::f64::consts::TAU * mode as f64 / g.length();
        let expected = Complex::new(0.0, -dt * k * k / 2.0).exp();
        let out = kinetic_step(&psi, dt).unwrap();
        for (a, b) in out.values().iter().zip(psi.values()) {
            assert!((a - b * expected).norm() < 1e-12);
        }
    }

    #[test]
    fn linear_potential_kicks_momentum() {
        let g = grid();
        let psi = WaveFunction::gaussian(g, 0.0, 1.0, 0.0).unwrap();
        let v = PotentialPreset::Linear.sample(&g);
        let dt = 0.05;
        let out = potential_step(&psi, &v, dt).unwrap();
        let shift = observables(&out).unwrap().mean_p - observables(&psi).unwrap().mean_p;
        assert!((shift + dt).abs() < 1e-6, "shift {shift}");
    }

    #[test]
    fn dense_kinetic_matches_fft_step() {
        let g = GridSpec::new(16, -4.0f64, 4.0, 1.5).unwrap();
        let psi = WaveFunction::gaussian(g, 0.2, 0.8, 0.4).unwrap();
        let kmat = dense_kinetic_matrix(&g);
        assert!(kmat.hermitian_deviation() < 1e-13);
        let via_fft = {
            let spec = fft(psi.values()).unwrap();
            let scaled: Vec<_> = spec
                .iter()
                .zip(g.kinetic_energies())
                .map(|(z, e)| z * e)
                .collect();
            ifft(&scaled).unwrap()
        };
        let via_dense = kmat.apply(psi.values()).unwrap();
        for (a, b) in via_fft.iter().zip(&via_dense) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn trajectory_records_stride_and_final() {
        let g = GridSpec::new(64, -10.0f64, 10.0, 1.0).unwrap();
        let psi = WaveFunction::gaussian(g, 0.0, 1.0, 0.0).unwrap();
        let v = PotentialPreset::Linear.sample(&g);
        let traj = split_step_trajectory(&psi, &v, 1.0, 10, 4, Some(5)).unwrap();
        let steps: Vec<usize> = traj.rows.iter().map(|r| r.step).collect();
        assert_eq!(steps, vec![0, 4, 8, 10]);
        let snaps: Vec<usize> = traj.snapshots.iter().map(|s| s.0).collect();
        assert_eq!(snaps, vec![0, 5, 10]);
        let direct = split_step_evolve(&psi, &v, 1.0, 10).unwrap();
        assert_eq!(direct, traj.final_state);
        assert!(split_step_trajectory(&psi, &v, 1.0, 10, 0, None).is_err());
    }

    #[test]
    fn preset_parsing() {
        assert_eq!("linear".parse::<PotentialPreset>().unwrap(), PotentialPreset::Linear);
        assert!("quartic".parse::<PotentialPreset>().is_err());
    }
}
