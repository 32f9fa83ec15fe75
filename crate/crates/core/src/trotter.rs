//! Lie–Trotter product formula for a Hamiltonian split `H = S + T`.
//!
//! The step propagator is `e^{-i dt S} e^{-i dt T}` (the `T` factor acts on a
//! state first). `trotter_evolve` raises it to the `n`-th power and
//! `convergence_study` measures the distance to `e^{-it(S+T)}`.
//!
//! The defect operator
//!
//! ```text
//! u_h = (e^{-ihS} e^{-ihT} - e^{-ih(S+T)}) / h
//! ```
//!
//! controls the global error through the telescoping identity
//! `A^n - B^n = Σ_j A^j (A - B) B^{n-1-j}`: with `A`, `B` unitary the state
//! error after `n` steps is at most `|t| · max_{|s| <= |t|} ||u_{t/n}(e^{-is(S+T)} ξ)||`.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expm::{exact_expm, UnitaryOperator};
use crate::linalg::{commutator, operator_2norm, vector_distance, ComplexMatrix, StateVector};
use crate::scalar::Real;

/// Errors below this are treated as exact and left out of the order fit.
pub const ORDER_FIT_FLOOR: f64 = 1e-12;

/// Default number of grid points for [`defect_supremum`].
pub const DEFAULT_SUPREMUM_SAMPLES: usize = 41;

/// Ordered pair of Hermitian parts `(S, T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitHamiltonian<T: Real> {
    s: ComplexMatrix<T>,
    t_op: ComplexMatrix<T>,
    commutator_norm: T,
}

impl<T: Real> SplitHamiltonian<T> {
    pub fn new(s: ComplexMatrix<T>, t_op: ComplexMatrix<T>) -> Result<Self> {
        if s.dim() != t_op.dim() {
            return Err(Error::DimensionMismatch {
                expected: s.dim(),
                found: t_op.dim(),
            });
        }
        for part in [&s, &t_op] {
            let tol = T::tolerance(1e-10) * part.frobenius_norm().max(T::one());
            let deviation = part.hermitian_deviation();
            if deviation > tol {
                return Err(Error::NotHermitian {
                    deviation: deviation.to_f64_lossy(),
                    tolerance: tol.to_f64_lossy(),
                });
            }
        }
        let commutator_norm = operator_2norm(&commutator(&s, &t_op)?)?;
        Ok(Self {
            s,
            t_op,
            commutator_norm,
        })
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    pub fn s(&self) -> &ComplexMatrix<T> {
        &self.s
    }

    pub fn t_op(&self) -> &ComplexMatrix<T> {
        &self.t_op
    }

    /// `S + T`.
    pub fn total(&self) -> ComplexMatrix<T> {
        &self.s + &self.t_op
    }

    /// `||[S, T]||_2`.
    pub fn commutator_norm(&self) -> T {
        self.commutator_norm
    }

    /// `e^{-it(S+T)}`.
    pub fn exact_propagator(&self, t: T) -> Result<UnitaryOperator<T>> {
        Ok(exact_expm(&self.total(), t)?.with_label("S+T"))
    }
}

/// One product-formula factor `e^{-i dt S} e^{-i dt T}`.
pub fn trotter_step<T: Real>(h: &SplitHamiltonian<T>, dt: T) -> Result<UnitaryOperator<T>> {
    let us = exact_expm(&h.s, dt)?;
    let ut = exact_expm(&h.t_op, dt)?;
    Ok(UnitaryOperator {
        matrix: us.matrix.matmul(&ut.matrix)?,
        generator_label: Some("trotter step".into()),
        time: dt,
    })
}

/// `(e^{-i(t/n)S} e^{-i(t/n)T})^n` by binary exponentiation.
pub fn trotter_evolve<T: Real>(h: &SplitHamiltonian<T>, t: T, n: u64) -> Result<UnitaryOperator<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("Trotter step count must be at least 1".into()));
    }
    let step = trotter_step(h, t / T::from_u64(n).expect("step count representable"))?;
    Ok(UnitaryOperator {
        matrix: step.matrix.pow(n),
        generator_label: Some(format!("trotter n={n}")),
        time: t,
    })
}

/// First-order product with linearized factors.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearizedTrotter<T: Real> {
    pub matrix: ComplexMatrix<T>,
    /// `N = 2^log2_n`.
    pub steps: u64,
    /// `||M^H M - I||_F`; nonzero since the factors are not unitary.
    pub unitarity_deviation: T,
}

/// `((I + A/N)(I + B/N))^N` with `A = -iSt`, `B = -iTt`, `N = 2^log2_n`,
/// formed by `log2_n` repeated squarings of the single factor.
pub fn linearized_trotter<T: Real>(
    h: &SplitHamiltonian<T>,
    t: T,
    log2_n: u32,
) -> Result<LinearizedTrotter<T>> {
    if log2_n > 62 {
        return Err(Error::InvalidArgument(format!("log2_n = {log2_n} exceeds 62")));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("evolution time"));
    }
    let steps = 1u64 << log2_n;
    let n = h.dim();
    let inv_steps = T::one() / T::from_u64(steps).expect("power of two representable");
    let coeff = Complex::new(T::zero(), -t * inv_steps);
    let id = ComplexMatrix::identity(n);
    let fa = &id + &h.s.scale(coeff);
    let fb = &id + &h.t_op.scale(coeff);
    let mut m = &fa * &fb;
    for _ in 0..log2_n {
        m = &m * &m;
        if !m.is_finite() {
            return Err(Error::Overflow("linearized Trotter squaring"));
        }
    }
    let unitarity_deviation = m.unitarity_deviation();
    Ok(LinearizedTrotter {
        matrix: m,
        steps,
        unitarity_deviation,
    })
}

fn check_step<T: Real>(step: T) -> Result<()> {
    if step.is_zero() {
        return Err(Error::InvalidArgument("step must be nonzero".into()));
    }
    if !step.is_finite() {
        return Err(Error::NonFinite("step"));
    }
    Ok(())
}

/// Defect operator applied through precomputed propagators.
fn defect_with<T: Real>(
    product: &ComplexMatrix<T>,
    exact: &ComplexMatrix<T>,
    step: T,
    xi: &[Complex<T>],
) -> Result<T> {
    let a = product.apply(xi)?;
    let b = exact.apply(xi)?;
    Ok(vector_distance(&a, &b) / step.abs())
}

/// `||u_h ξ||_2` with `h = step`.
pub fn defect<T: Real>(h: &SplitHamiltonian<T>, step: T, xi: &StateVector<T>) -> Result<T> {
    check_step(step)?;
    let product = trotter_step(h, step)?;
    let exact = h.exact_propagator(step)?;
    defect_with(&product.matrix, &exact.matrix, step, xi.amplitudes())
}

/// Uniform grid of `samples` points on `[-|t|, |t|]`, both ends included.
/// A single sample degenerates to the left endpoint `-|t|`.
pub fn supremum_grid<T: Real>(t: T, samples: usize) -> Vec<T> {
    let r = t.abs();
    match samples {
        0 => Vec::new(),
        1 => vec![-r],
        _ => {
            let last = T::from_count(samples - 1);
            (0..samples)
                .map(|k| -r + (r + r) * T::from_count(k) / last)
                .collect()
        }
    }
}

/// `max_s ||u_h(e^{-is(S+T)} ξ)||` over [`supremum_grid`].
pub fn defect_supremum<T: Real>(
    h: &SplitHamiltonian<T>,
    step: T,
    xi: &StateVector<T>,
    t: T,
    samples: usize,
) -> Result<T> {
    check_step(step)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("supremum needs at least one sample".into()));
    }
    if xi.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: xi.dim(),
        });
    }
    let product = trotter_step(h, step)?.matrix;
    let exact = h.exact_propagator(step)?.matrix;
    let total = h.total();
    let decomposition = crate::linalg::eig_hermitian(&total)?;
    let mut best = T::zero();
    for s in supremum_grid(t, samples) {
        let xi_s = decomposition
            .apply_function(|e| crate::scalar::phase(e * s))
            .apply(xi.amplitudes())?;
        best = best.max(defect_with(&product, &exact, step, &xi_s)?);
    }
    Ok(best)
}

/// `||i (e^{-i step H} ξ - ξ) / step - H ξ||_2`.
pub fn generator_residual<T: Real>(
    hmat: &ComplexMatrix<T>,
    step: T,
    xi: &StateVector<T>,
) -> Result<T> {
    check_step(step)?;
    let u = exact_expm(hmat, step)?;
    let evolved = u.matrix.apply(xi.amplitudes())?;
    let h_xi = hmat.apply(xi.amplitudes())?;
    let i = Complex::new(T::zero(), T::one());
    let residual: Vec<Complex<T>> = evolved
        .iter()
        .zip(xi.amplitudes())
        .zip(&h_xi)
        .map(|((&e, &x), &hx)| i * (e - x) / step - hx)
        .collect();
    Ok(crate::linalg::vector_norm(&residual))
}

/// How convergence errors are measured.
#[derive(Debug, Clone, PartialEq)]
pub enum ErrorMetric<T: Real> {
    /// `||U_n - U||_2` (spectral norm of the operator difference).
    Operator2Norm,
    /// `||(U_n - U) ξ||_2` for a fixed state, the pointwise limit.
    StateVectorNorm(StateVector<T>),
}

impl<T: Real> ErrorMetric<T> {
    pub fn name(&self) -> &'static str {
        match self {
            ErrorMetric::Operator2Norm => "operator_2norm",
            ErrorMetric::StateVectorNorm(_) => "state_vector_norm",
        }
    }

    pub fn xi(&self) -> Option<&StateVector<T>> {
        match self {
            ErrorMetric::Operator2Norm => None,
            ErrorMetric::StateVectorNorm(xi) => Some(xi),
        }
    }

    /// Distance between two propagators in this metric.
    pub fn distance(&self, a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<T> {
        match self {
            ErrorMetric::Operator2Norm => operator_2norm(&a.try_sub(b)?),
            ErrorMetric::StateVectorNorm(xi) => {
                Ok(vector_distance(&a.apply(xi.amplitudes())?, &b.apply(xi.amplitudes())?))
            }
        }
    }
}

/// Errors of the product formula against the exact propagator over a list
/// of step counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<T: Real> {
    pub t: T,
    pub step_counts: Vec<u64>,
    pub errors: Vec<T>,
    /// Negated least-squares slope of `log(error)` against `log(n)`; NaN
    /// when fewer than two points lie above [`ORDER_FIT_FLOOR`].
    pub fitted_order: T,
    pub fitted_order_valid: bool,
    pub metric: ErrorMetric<T>,
}

impl<T: Real> ConvergenceReport<T> {
    pub fn rows(&self) -> impl Iterator<Item = (u64, T)> + '_ {
        self.step_counts.iter().copied().zip(self.errors.iter().copied())
    }
}

/// Ordinary least-squares fit of `-log(error)` against `log(n)`, skipping
/// errors under [`ORDER_FIT_FLOOR`]. `None` when fewer than two points remain.
pub fn fit_order<T: Real>(step_counts: &[u64], errors: &[T]) -> Option<T> {
    let floor = T::lit(ORDER_FIT_FLOOR);
    let points: Vec<(T, T)> = step_counts
        .iter()
        .zip(errors)
        .filter(|(_, &e)| e.is_finite() && e >= floor)
        .map(|(&n, &e)| (T::from_u64(n).expect("step count").ln(), -e.ln()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let count = T::from_count(points.len());
    let mean_x = points.iter().map(|p| p.0).sum::<T>() / count;
    let mean_y = points.iter().map(|p| p.1).sum::<T>() / count;
    let sxx: T = points.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: T = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx.is_zero() {
        return None;
    }
    Some(sxy / sxx)
}

/// Runs `trotter_evolve` for every `n` (in parallel, each from scratch) and
/// compares against `e^{-it(S+T)}`.
pub fn convergence_study<T: Real>(
    h: &SplitHamiltonian<T>,
    t: T,
    step_counts: &[u64],
    metric: ErrorMetric<T>,
) -> Result<ConvergenceReport<T>> {
    if step_counts.is_empty() {
        return Err(Error::InvalidArgument("step_counts must be nonempty".into()));
    }
    if step_counts[0] == 0 {
        return Err(Error::InvalidArgument("step counts must be positive".into()));
    }
    if step_counts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("step counts must be strictly increasing".into()));
    }
    if let Some(xi) = metric.xi() {
        if xi.dim() != h.dim() {
            return Err(Error::DimensionMismatch {
                expected: h.dim(),
                found: xi.dim(),
            });
        }
    }
    let exact = h.exact_propagator(t)?.matrix;
    let errors = step_counts
        .par_iter()
        .map(|&n| {
            let approx = trotter_evolve(h, t, n)?;
            metric.distance(&approx.matrix, &exact)
        })
        .collect::<Result<Vec<T>>>()?;
    let fit = fit_order(step_counts, &errors);
    Ok(ConvergenceReport {
        t,
        step_counts: step_counts.to_vec(),
        errors,
        fitted_order: fit.unwrap_or_else(T::nan),
        fitted_order_valid: fit.is_some(),
        metric,
    })
}
