use nalgebra::DMatrix;

use super::{hermitian_eigenvalues, StateVector, Subsystem, C64, CLIP_THRESHOLD, NORM_TOLERANCE};
use crate::error::{Error, Result};

/// Tolerance for Hermiticity and unit trace of a density matrix.
pub const DENSITY_TOLERANCE: f64 = 1e-12;

/// Hermitian, unit-trace density matrix, full or reduced.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity and unit trace. Positivity is checked lazily by
    /// [`entropy`] and [`DensityMatrix::check_positive`].
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::Validation(format!(
                "density matrix must be square and non-empty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let n = entries.nrows();
        let mut herm_err = 0.0f64;
        for i in 0..n {
            for j in i..n {
                herm_err = herm_err.max((entries[(i, j)] - entries[(j, i)].conj()).norm());
            }
        }
        if herm_err > DENSITY_TOLERANCE {
            return Err(Error::Validation(format!(
                "density matrix not Hermitian (max deviation {herm_err:e})"
            )));
        }
        let tr = entries.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOLERANCE || tr.im.abs() > DENSITY_TOLERANCE {
            return Err(Error::Validation(format!("density matrix trace {tr} differs from 1")));
        }
        Ok(Self { entries })
    }

    /// Diagonal density matrix with the given populations.
    pub fn from_diagonal(populations: &[f64]) -> Result<Self> {
        let n = populations.len();
        Self::new(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(populations[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        Self::from_diagonal(&vec![1.0 / n as f64; n])
    }

    pub(crate) fn from_raw(entries: DMatrix<C64>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// Ascending spectrum.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eigenvalues(&self.entries)?.iter().copied().collect())
    }

    pub fn check_positive(&self) -> Result<()> {
        match self.eigenvalues()?.first() {
            Some(&min) if min < -CLIP_THRESHOLD => Err(Error::Positivity { eigenvalue: min }),
            _ => Ok(()),
        }
    }
}

/// `|ψ⟩⟨ψ|` for a normalized state.
pub fn density_from_state(psi: &StateVector) -> Result<DensityMatrix> {
    let norm = psi.norm_sqr().sqrt();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::Validation(format!("state norm {norm} is not 1")));
    }
    let a = psi.amplitudes();
    Ok(DensityMatrix::from_raw(a * a.adjoint()))
}

/// Traces out one subsystem of `rho`, keeping `keep`.
pub fn partial_trace(rho: &DensityMatrix, dim_g: usize, dim_c: usize, keep: Subsystem) -> Result<DensityMatrix> {
    if dim_g == 0 || dim_c == 0 {
        return Err(Error::Validation("subsystem dimensions must be positive".into()));
    }
    if rho.dim() != dim_g * dim_c {
        return Err(Error::Dimension {
            expected: dim_g * dim_c,
            got: rho.dim(),
        });
    }
    let e = &rho.entries;
    let out = match keep {
        Subsystem::Gas => DMatrix::from_fn(dim_g, dim_g, |i, k| {
            (0..dim_c).map(|j| e[(i * dim_c + j, k * dim_c + j)]).sum()
        }),
        Subsystem::Container => DMatrix::from_fn(dim_c, dim_c, |j, l| {
            (0..dim_g).map(|i| e[(i * dim_c + j, i * dim_c + l)]).sum()
        }),
    };
    Ok(DensityMatrix::from_raw(out))
}

/// `Tr ρ²`, evaluated as the squared Frobenius norm of the Hermitian matrix.
pub fn purity(rho: &DensityMatrix) -> f64 {
    // a unit-trace 1x1 matrix is exactly [1]
    if rho.dim() == 1 {
        return 1.0;
    }
    rho.entries.iter().map(|z| z.norm_sqr()).sum()
}

/// Von Neumann entropy `-Tr ρ ln ρ` in nats.
pub fn entropy(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() == 1 {
        return Ok(0.0);
    }
    entropy_from_spectrum(&rho.eigenvalues()?)
}

/// `-Σ λ ln λ` with `0 ln 0 = 0`; eigenvalues in `[-1e-10, 0)` are clipped.
pub fn entropy_from_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &lam in eigenvalues {
        if lam < -CLIP_THRESHOLD {
            return Err(Error::Positivity { eigenvalue: lam });
        }
        if lam > 0.0 {
            s -= lam * lam.ln();
        }
    }
    Ok(s.max(0.0))
}
