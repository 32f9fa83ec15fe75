//! Constructors for test Hamiltonians.
//!
//! Random matrices come from Xoshiro256++ seeded through SplitMix64
//! (`rand_xoshiro::Xoshiro256PlusPlus::seed_from_u64`). A uniform real in
//! `[0, 1)` is the top 53 bits of one 64-bit output times `2^-53`; entries are
//! drawn row-major, real part before imaginary part, and mapped to `[-1, 1)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{c, cr, Real};
use crate::trotter::SplitHamiltonian;

/// Single-qubit Pauli matrices.
pub mod pauli {
    use super::*;

    pub fn i<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::identity(2)
    }

    pub fn x<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).expect("2x2")
    }

    pub fn y<T: Real>() -> ComplexMatrix<T> {
        let z = T::zero();
        let o = T::one();
        ComplexMatrix::from_rows(vec![vec![c(z, z), c(z, -o)], vec![c(z, o), c(z, z)]])
            .expect("2x2")
    }

    pub fn z<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).expect("2x2")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub fn matrix<T: Real>(self) -> ComplexMatrix<T> {
        match self {
            PauliLetter::I => pauli::i(),
            PauliLetter::X => pauli::x(),
            PauliLetter::Y => pauli::y(),
            PauliLetter::Z => pauli::z(),
        }
    }

    fn from_char(ch: char) -> Option<Self> {
        match ch {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

/// Real coefficient times a tensor product of single-qubit Paulis. The first
/// letter acts on the most significant qubit. Text form: `0.5*XZY`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    coefficient: f64,
    letters: Vec<PauliLetter>,
}

impl PauliString {
    pub fn new(coefficient: f64, letters: Vec<PauliLetter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidArgument("Pauli string needs at least one qubit".into()));
        }
        if !coefficient.is_finite() {
            return Err(Error::NonFinite("Pauli coefficient"));
        }
        Ok(Self {
            coefficient,
            letters,
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn dim(&self) -> usize {
        1 << self.letters.len()
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (coeff, word) = match s.split_once('*') {
            Some((coeff, word)) => {
                let coeff = coeff
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("Pauli coefficient {coeff:?}: {e}")))?;
                (coeff, word.trim())
            }
            None => (1.0, s),
        };
        let letters = word
            .chars()
            .map(|ch| {
                PauliLetter::from_char(ch)
                    .ok_or_else(|| Error::Parse(format!("invalid Pauli letter {ch:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PauliString::new(coeff, letters).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*", self.coefficient)?;
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Diagonal Hamiltonian with the given energies.
pub fn build_diagonal<T: Real>(energies: &[T]) -> Result<ComplexMatrix<T>> {
    if energies.is_empty() {
        return Err(Error::InvalidArgument("energy list must be nonempty".into()));
    }
    if energies.iter().any(|e| !e.is_finite()) {
        return Err(Error::NonFinite("energies"));
    }
    let diag: Vec<Complex<T>> = energies.iter().map(|&e| cr(e)).collect();
    Ok(ComplexMatrix::from_diagonal(&diag))
}

pub fn build_pauli<T: Real>(p: &PauliString) -> ComplexMatrix<T> {
    let mut out = p.letters[0].matrix::<T>();
    for letter in &p.letters[1..] {
        out = kron(&out, &letter.matrix());
    }
    out.scale_real(T::lit(p.coefficient))
}

/// Sum of Pauli strings on a common register.
pub fn build_pauli_sum<T: Real>(terms: &[PauliString]) -> Result<ComplexMatrix<T>> {
    let first = terms
        .first()
        .ok_or_else(|| Error::InvalidArgument("Pauli sum needs at least one term".into()))?;
    let mut acc = build_pauli::<T>(first);
    for term in &terms[1..] {
        if term.qubit_count() != first.qubit_count() {
            return Err(Error::DimensionMismatch {
                expected: first.qubit_count(),
                found: term.qubit_count(),
            });
        }
        acc = acc.try_add(&build_pauli(term))?;
    }
    Ok(acc)
}

/// Open-boundary nearest-neighbour chain split into hopping `S` and onsite
/// `T` parts.
pub fn build_tight_binding<T: Real>(
    sites: usize,
    hopping: T,
    onsite: &[T],
) -> Result<SplitHamiltonian<T>> {
    if sites < 2 {
        return Err(Error::InvalidArgument("tight-binding chain needs at least 2 sites".into()));
    }
    if onsite.len() != sites {
        return Err(Error::DimensionMismatch {
            expected: sites,
            found: onsite.len(),
        });
    }
    let mut hop = ComplexMatrix::zeros(sites);
    for i in 0..sites - 1 {
        hop[(i, i + 1)] = cr(hopping);
        hop[(i + 1, i)] = cr(hopping);
    }
    SplitHamiltonian::new(hop, build_diagonal(onsite)?)
}

/// The assembled tight-binding matrix `S + T`.
pub fn tight_binding_matrix<T: Real>(
    sites: usize,
    hopping: T,
    onsite: &[T],
) -> Result<ComplexMatrix<T>> {
    let split = build_tight_binding(sites, hopping, onsite)?;
    Ok(split.total())
}

/// Uniform reals in `[0, 1)` from the documented seeded generator.
pub fn uniform_stream(seed: u64) -> impl Iterator<Item = f64> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    std::iter::repeat_with(move || (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64))
}

/// `(G + G^H) / 2` with `G` entries uniform in `[-1, 1)` (both parts).
pub fn build_random_hermitian<T: Real>(dim: usize, seed: u64) -> Result<ComplexMatrix<T>> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let mut stream = uniform_stream(seed).map(|u| 2.0 * u - 1.0);
    let mut g = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let re = stream.next().expect("infinite stream");
            let im = stream.next().expect("infinite stream");
            g[(i, j)] = c(T::lit(re), T::lit(im));
        }
    }
    let half = T::lit(0.5);
    let mut h = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in i..dim {
            let v = (g[(i, j)] + g[(j, i)].conj()) * half;
            h[(i, j)] = v;
            h[(j, i)] = v.conj();
        }
        h[(i, i)] = cr(h[(i, i)].re);
    }
    Ok(h)
}

/// Real diagonal matrix with entries uniform in `[-1, 1)`.
pub fn build_random_diagonal<T: Real>(dim: usize, seed: u64) -> Result<ComplexMatrix<T>> {
    let energies: Vec<T> = uniform_stream(seed)
        .take(dim)
        .map(|u| T::lit(2.0 * u - 1.0))
        .collect();
    build_diagonal(&energies)
}

/// Two independent seeded random Hermitian parts (`seed`, `seed + 1`).
pub fn build_random_split<T: Real>(dim: usize, seed: u64) -> Result<SplitHamiltonian<T>> {
    SplitHamiltonian::new(
        build_random_hermitian(dim, seed)?,
        build_random_hermitian(dim, seed.wrapping_add(1))?,
    )
}
