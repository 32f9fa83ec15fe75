//! Exponentials of Hermitian operators, Lie–Trotter product formulas and
//! split-step Schrödinger evolution.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the `*64`
//! and `*32` aliases below name the concrete instantiations.

pub mod cli;
pub mod error;
pub mod expm;
pub mod hamiltonians;
pub mod io;
pub mod linalg;
pub mod scalar;
pub mod schrodinger;
pub mod trotter;

pub use error::{Error, Result};
pub use expm::{evolve_state, exact_expm, taylor_expm, UnitaryOperator};
pub use hamiltonians::{PauliLetter, PauliString};
pub use linalg::{ComplexMatrix, SpectralDecomposition, StateVector};
pub use scalar::Real;
pub use schrodinger::{GridSpec, WaveFunction};
pub use trotter::{ConvergenceReport, ErrorMetric, SplitHamiltonian};

pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type ComplexMatrix32 = ComplexMatrix<f32>;
pub type StateVector64 = StateVector<f64>;
pub type StateVector32 = StateVector<f32>;
pub type SpectralDecomposition64 = SpectralDecomposition<f64>;
pub type UnitaryOperator64 = UnitaryOperator<f64>;
pub type UnitaryOperator32 = UnitaryOperator<f32>;
pub type SplitHamiltonian64 = SplitHamiltonian<f64>;
pub type SplitHamiltonian32 = SplitHamiltonian<f32>;
pub type ConvergenceReport64 = ConvergenceReport<f64>;
pub type GridSpec64 = GridSpec<f64>;
pub type WaveFunction64 = WaveFunction<f64>;
pub type WaveFunction32 = WaveFunction<f32>;
