use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{StateVector, C64};
use crate::error::{Error, Result};

/// Accepted deviation from Hermiticity, relative to `max(1, max |M_ij|)`.
const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Spectral decomposition `M = V diag(λ) V†` with ascending eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<C64>,
}

impl EigenSystem {
    /// Sorts the pairs ascending by eigenvalue. Columns of `eigenvectors` must
    /// be orthonormal.
    pub(crate) fn from_unsorted(eigenvalues: DVector<f64>, eigenvectors: DMatrix<C64>) -> Self {
        let n = eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
        let values = DVector::from_fn(n, |k, _| eigenvalues[order[k]]);
        let vectors = DMatrix::from_fn(eigenvectors.nrows(), n, |i, k| eigenvectors[(i, order[k])]);
        Self {
            eigenvalues: values,
            eigenvectors: vectors,
        }
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Columns are eigenvectors.
    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let v = &self.eigenvectors;
        let scaled = DMatrix::from_fn(v.nrows(), v.ncols(), |i, k| v[(i, k)] * self.eigenvalues[k]);
        scaled * v.adjoint()
    }
}

fn checked_symmetrize(m: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    if !m.is_square() {
        return Err(Error::Validation(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    if dev > HERMITIAN_TOLERANCE * scale {
        return Err(Error::Validation(format!("matrix not Hermitian (deviation {dev:e})")));
    }
    Ok((m + m.adjoint()) * C64::new(0.5, 0.0))
}

fn is_diagonal(m: &DMatrix<C64>) -> bool {
    let n = m.nrows();
    (0..n).all(|j| (0..n).all(|i| i == j || m[(i, j)] == C64::new(0.0, 0.0)))
}

fn max_iterations(n: usize) -> usize {
    (100 * n).max(10_000)
}

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized as
/// `(M + M†)/2`; exactly diagonal matrices are decomposed without iteration.
pub fn hermitian_eigendecompose(m: &DMatrix<C64>) -> Result<EigenSystem> {
    let h = checked_symmetrize(m)?;
    let n = h.nrows();
    if is_diagonal(&h) {
        let values = DVector::from_fn(n, |i, _| h[(i, i)].re);
        return Ok(EigenSystem::from_unsorted(values, DMatrix::identity(n, n)));
    }
    let iterations = max_iterations(n);
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, iterations).ok_or(Error::Convergence {
        what: "Hermitian eigensolver",
        iterations,
        dim: n,
    })?;
    Ok(EigenSystem::from_unsorted(eig.eigenvalues, eig.eigenvectors))
}

/// Ascending eigenvalues only.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Result<DVector<f64>> {
    let h = checked_symmetrize(m)?;
    let n = h.nrows();
    let mut values: Vec<f64> = if is_diagonal(&h) {
        (0..n).map(|i| h[(i, i)].re).collect()
    } else if n == 2 {
        // closed form avoids the iterative solver for qubit reductions
        let a = h[(0, 0)].re;
        let d = h[(1, 1)].re;
        let b = h[(0, 1)].norm();
        let mean = 0.5 * (a + d);
        let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        vec![mean - r, mean + r]
    } else {
        let iterations = max_iterations(n);
        SymmetricEigen::try_new(h, f64::EPSILON, iterations)
            .ok_or(Error::Convergence {
                what: "Hermitian eigensolver",
                iterations,
                dim: n,
            })?
            .eigenvalues
            .iter()
            .copied()
            .collect()
    };
    values.sort_by(f64::total_cmp);
    Ok(DVector::from_vec(values))
}

/// Exact propagation `ψ(t) = V e^{-iλt} V† ψ0` with `ħ = 1`.
pub fn propagate(psi0: &StateVector, es: &EigenSystem, t: f64) -> Result<StateVector> {
    if psi0.dim() != es.dim() {
        return Err(Error::Dimension {
            expected: es.dim(),
            got: psi0.dim(),
        });
    }
    if t == 0.0 {
        return Ok(psi0.clone());
    }
    let v = es.eigenvectors();
    let mut coeffs = v.ad_mul(psi0.amplitudes());
    for (c, &lam) in coeffs.iter_mut().zip(es.eigenvalues().iter()) {
        *c *= C64::from_polar(1.0, -lam * t);
    }
    StateVector::new(v * coeffs, psi0.dim_g(), psi0.dim_c())
}
