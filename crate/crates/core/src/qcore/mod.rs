//! Dense complex linear algebra for bipartite pure states and density
//! matrices.
//!
//! States live on the product basis `|i⟩_gas ⊗ |j⟩_container`, flattened
//! row-major as `i * dim_c + j`. Units are natural (`k = ħ = 1`) and entropies
//! are in nats.

mod density;
mod eigen;
mod state;

pub use density::{density_from_state, entropy, entropy_from_spectrum, partial_trace, purity, DensityMatrix};
pub use eigen::{hermitian_eigendecompose, hermitian_eigenvalues, propagate, EigenSystem};
pub use state::StateVector;

use serde::{Deserialize, Serialize};

pub type C64 = num_complex::Complex64;

/// Norm deviation beyond which a state is rejected as not normalized.
pub const NORM_TOLERANCE: f64 = 1e-8;

/// Eigenvalues in `[-CLIP_THRESHOLD, 0)` are treated as round-off and clipped.
pub const CLIP_THRESHOLD: f64 = 1e-10;

/// Selects one half of the bipartition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subsystem {
    Gas,
    Container,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::Gas => Subsystem::Container,
            Subsystem::Container => Subsystem::Gas,
        }
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    pub fn gaussian(rng: &mut impl Rng) -> f64 {
        let u1: f64 = 1.0 - rng.random::<f64>();
        let u2: f64 = rng.random::<f64>();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn random_state(rng: &mut impl Rng, dim_g: usize, dim_c: usize) -> StateVector {
        let amps = DVector::from_fn(dim_g * dim_c, |_, _| C64::new(gaussian(rng), gaussian(rng)));
        StateVector::normalized(amps, dim_g, dim_c).unwrap()
    }

    pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> DMatrix<C64> {
        let g = DMatrix::from_fn(n, n, |_, _| C64::new(gaussian(rng), gaussian(rng)));
        (&g + g.adjoint()) * C64::new(0.5, 0.0)
    }

    /// Unitary from the QR factor of a complex Gaussian matrix.
    pub fn random_unitary(rng: &mut impl Rng, n: usize) -> DMatrix<C64> {
        let g = DMatrix::from_fn(n, n, |_, _| C64::new(gaussian(rng), gaussian(rng)));
        g.qr().q()
    }

    /// Random mixed state `A A† / Tr(A A†)` with `A` of shape `n × rank`.
    pub fn random_mixed(rng: &mut impl Rng, n: usize, rank: usize) -> DensityMatrix {
        let a = DMatrix::from_fn(n, rank, |_, _| C64::new(gaussian(rng), gaussian(rng)));
        let m = &a * a.adjoint();
        let tr = m.trace();
        let mut m = m / tr;
        // exact Hermitian symmetry
        let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        m.copy_from(&h);
        DensityMatrix::new(m).unwrap()
    }

    pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
        a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }
}
