//! Microcanonically constrained Hamiltonians `H = L_g' + L_c + W'` and exact
//! trajectories under them.
//!
//! `L_g'` and `L_c` are diagonal in the product basis with the shell energies
//! of each subsystem. The coupling `W'` is a random Hermitian matrix confined
//! to the product shells `(A, B)`, so it commutes with both local energies and
//! every block weight `Σ_{i∈A, j∈B} |ψ_ij|²` is a constant of motion.

mod deco;
mod evolve;

pub use deco::{deco_purity, resonance_check, EnergyTable, Resonance, ResonanceReport};
pub use evolve::{
    effective_velocity, evolve_observables, time_average_purity, time_averages, SeriesTag, TimeAverages, TimeSeries,
};

use nalgebra::{DMatrix, DVector};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{hermitian_eigendecompose, EigenSystem, C64};
use crate::sampling::complex_gaussian;
use crate::shells::SystemProfile;

/// Which local energies the coupling must commute with.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommutationMode {
    /// `[L_g', W'] = [L_c, W'] = 0`: every `(A, B)` block weight is conserved.
    #[default]
    Strict,
    /// Only `[L_g', W'] = 0`: only the gas shell weights are conserved.
    GasOnly,
}

/// Hamiltonian with its eigendecomposition.
#[derive(Debug, Clone)]
pub struct MicroHamiltonian {
    sys: SystemProfile,
    coupling: f64,
    mode: CommutationMode,
    matrix: DMatrix<C64>,
    interaction: DMatrix<C64>,
    eigensystem: EigenSystem,
    block_index: Vec<(usize, usize)>,
}

impl MicroHamiltonian {
    pub fn system(&self) -> &SystemProfile {
        &self.sys
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn mode(&self) -> CommutationMode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Full `H`.
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// `W'`, already scaled by the coupling strength.
    pub fn interaction(&self) -> &DMatrix<C64> {
        &self.interaction
    }

    pub fn eigensystem(&self) -> &EigenSystem {
        &self.eigensystem
    }

    /// Shell pair `(A, B)` of every product basis state.
    pub fn block_index(&self) -> &[(usize, usize)] {
        &self.block_index
    }

    /// `L_g' ⊗ 1`.
    pub fn gas_energy(&self) -> DMatrix<C64> {
        let eg = self.sys.gas().basis_energies();
        let dc = self.sys.dim_c();
        diagonal(self.dim(), |k| eg[k / dc])
    }

    /// `1 ⊗ L_c`.
    pub fn container_energy(&self) -> DMatrix<C64> {
        let ec = self.sys.container().basis_energies();
        let dc = self.sys.dim_c();
        diagonal(self.dim(), |k| ec[k % dc])
    }
}

fn diagonal(n: usize, f: impl Fn(usize) -> f64) -> DMatrix<C64> {
    DMatrix::from_diagonal(&DVector::from_fn(n, |k, _| C64::new(f(k), 0.0)))
}

/// Random Hermitian `d × d` block with entry variance `1/d`.
fn gue_block(rng: &mut impl RngCore, d: usize) -> DMatrix<C64> {
    let g = DMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
    let scale = 1.0 / (2.0 * d as f64).sqrt();
    let mut w = (&g + g.adjoint()) * C64::new(scale, 0.0);
    for k in 0..d {
        w[(k, k)].im = 0.0;
    }
    w
}

/// Builds `H` with `W'` confined to the product shells (`Strict`).
pub fn build_hamiltonian(sys: &SystemProfile, coupling: f64, rng: &mut impl RngCore) -> Result<MicroHamiltonian> {
    build_hamiltonian_with(sys, coupling, CommutationMode::Strict, rng)
}

/// Builds `H = L_g' + L_c + λ W'` with the requested commutation structure.
/// The eigensystem is assembled block by block, which is exact because `H`
/// is block diagonal.
pub fn build_hamiltonian_with(
    sys: &SystemProfile,
    coupling: f64,
    mode: CommutationMode,
    rng: &mut impl RngCore,
) -> Result<MicroHamiltonian> {
    if !coupling.is_finite() || coupling < 0.0 {
        return Err(Error::Validation(format!(
            "coupling strength must be finite and non-negative (use |λ|), got {coupling}"
        )));
    }
    let (dg, dc) = (sys.dim_g(), sys.dim_c());
    let n = dg * dc;
    let eg = sys.gas().basis_energies();
    let ec = sys.container().basis_energies();
    let shell_g = sys.gas().shell_of_basis();
    let shell_c = sys.container().shell_of_basis();

    let blocks: Vec<Vec<usize>> = match mode {
        CommutationMode::Strict => {
            let mut out = Vec::new();
            for ra in sys.gas().ranges() {
                for rb in sys.container().ranges() {
                    out.push(ra.clone().flat_map(|i| rb.clone().map(move |j| i * dc + j)).collect());
                }
            }
            out
        }
        CommutationMode::GasOnly => sys
            .gas()
            .ranges()
            .into_iter()
            .map(|ra| ra.flat_map(|i| (0..dc).map(move |j| i * dc + j)).collect())
            .collect(),
    };

    let mut matrix = diagonal(n, |k| eg[k / dc] + ec[k % dc]);
    let mut interaction = DMatrix::<C64>::zeros(n, n);
    let mut values = DVector::<f64>::zeros(n);
    let mut vectors = DMatrix::<C64>::zeros(n, n);
    let mut col = 0;
    for idx in &blocks {
        let d = idx.len();
        let w = gue_block(rng, d) * C64::new(coupling, 0.0);
        let mut local = DMatrix::from_fn(d, d, |r, s| w[(r, s)]);
        for r in 0..d {
            local[(r, r)] += C64::new(eg[idx[r] / dc] + ec[idx[r] % dc], 0.0);
            for s in 0..d {
                interaction[(idx[r], idx[s])] = w[(r, s)];
                matrix[(idx[r], idx[s])] = local[(r, s)];
            }
        }
        let es = hermitian_eigendecompose(&local)?;
        for k in 0..d {
            values[col] = es.eigenvalues()[k];
            for r in 0..d {
                vectors[(idx[r], col)] = es.eigenvectors()[(r, k)];
            }
            col += 1;
        }
    }

    Ok(MicroHamiltonian {
        sys: sys.clone(),
        coupling,
        mode,
        matrix,
        interaction,
        eigensystem: EigenSystem::from_unsorted(values, vectors),
        block_index: (0..n).map(|k| (shell_g[k / dc], shell_c[k % dc])).collect(),
    })
}
