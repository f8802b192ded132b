//! Uniform sampling of pure states on the microcanonically allowed region and
//! Monte Carlo estimates over it.
//!
//! The allowed region is a product of spheres: for every pair of gas shell `A`
//! and container shell `B` the amplitudes `ψ_ij`, `i ∈ A`, `j ∈ B`, lie on a
//! sphere of squared radius `w_AB = P_A^g P_B^c`. Each sphere is sampled from
//! its surface measure by normalizing a complex Gaussian vector.

mod estimate;
mod rng;

pub use estimate::{
    entropy_gap_scan, estimate_average, estimate_observables, purity_histogram, EstimateResult, GapPoint, Histogram,
    Observable,
};
pub use rng::{complex_gaussian, sample_stream, standard_normal_pair};

use nalgebra::DVector;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{StateVector, C64};
use crate::shells::{ShellProfile, SystemProfile};

/// Monte Carlo run parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub seed: u64,
    pub n_samples: usize,
    pub n_bins: usize,
    pub worker_count: usize,
}

impl SampleConfig {
    pub fn new(seed: u64, n_samples: usize) -> Self {
        Self {
            seed,
            n_samples,
            n_bins: 100,
            worker_count: 1,
        }
    }

    pub fn with_workers(mut self, worker_count: usize) -> Self {
        self.worker_count = worker_count;
        self
    }

    pub fn with_bins(mut self, n_bins: usize) -> Self {
        self.n_bins = n_bins;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::Validation("n_samples must be >= 1".into()));
        }
        if self.n_bins < 2 {
            return Err(Error::Validation("n_bins must be >= 2".into()));
        }
        if self.worker_count == 0 {
            return Err(Error::Validation("worker_count must be >= 1".into()));
        }
        Ok(())
    }
}

/// Fills `out` with a uniform point on the sphere of squared radius `weight`.
fn fill_sphere(rng: &mut impl RngCore, out: &mut [C64], weight: f64) {
    for z in out.iter_mut() {
        *z = complex_gaussian(rng);
    }
    let norm = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let scale = weight.sqrt() / norm;
    out.iter_mut().for_each(|z| *z *= scale);
}

/// Draws a state uniformly from the region with block weights
/// `w_AB = P_A^g P_B^c`.
pub fn sample_constrained_state(sys: &SystemProfile, rng: &mut impl RngCore) -> Result<StateVector> {
    let (g, c) = (sys.gas(), sys.container());
    if sys.block_weights().iter().all(|&w| w == 0.0) {
        return Err(Error::Validation("all block weights are zero".into()));
    }
    let dc = sys.dim_c();
    let mut amps = DVector::<C64>::zeros(sys.dim());
    let mut block = Vec::new();
    for (sa, ra) in g.shells().iter().zip(g.ranges()) {
        for (sb, rb) in c.shells().iter().zip(c.ranges()) {
            let w = sa.weight * sb.weight;
            if w == 0.0 {
                continue;
            }
            block.resize(ra.len() * rb.len(), C64::new(0.0, 0.0));
            fill_sphere(rng, &mut block, w);
            let mut k = 0;
            for i in ra.clone() {
                for j in rb.clone() {
                    amps[i * dc + j] = block[k];
                    k += 1;
                }
            }
        }
    }
    StateVector::new(amps, sys.dim_g(), dc)
}

fn sample_shell_state(p: &ShellProfile, rng: &mut impl RngCore) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); p.dim()];
    for (s, r) in p.shells().iter().zip(p.ranges()) {
        if s.weight > 0.0 {
            fill_sphere(rng, &mut v[r], s.weight);
        }
    }
    v
}

/// Draws `ψ_g ⊗ ψ_c` with each factor uniform on its shell spheres of squared
/// radii `P_A^g` and `P_B^c`.
pub fn sample_product_state(sys: &SystemProfile, rng: &mut impl RngCore) -> Result<StateVector> {
    let g = sample_shell_state(sys.gas(), rng);
    let c = sample_shell_state(sys.container(), rng);
    StateVector::product(&g, &c)
}

/// Squared amplitude mass in each `(A, B)` block, row-major over shells.
pub fn block_weights_of(sys: &SystemProfile, psi: &StateVector) -> Vec<f64> {
    let dc = psi.dim_c();
    let amps = psi.amplitudes();
    let mut out = Vec::with_capacity(sys.gas().len() * sys.container().len());
    for ra in sys.gas().ranges() {
        for rb in sys.container().ranges() {
            let mut w = 0.0;
            for i in ra.clone() {
                for j in rb.clone() {
                    w += amps[i * dc + j].norm_sqr();
                }
            }
            out.push(w);
        }
    }
    out
}

/// Squared amplitude mass in each gas shell.
pub fn gas_shell_weights_of(sys: &SystemProfile, psi: &StateVector) -> Vec<f64> {
    let dc = psi.dim_c();
    let amps = psi.amplitudes();
    sys.gas()
        .ranges()
        .into_iter()
        .map(|r| {
            amps.as_slice()[r.start * dc..r.end * dc]
                .iter()
                .map(|z| z.norm_sqr())
                .sum()
        })
        .collect()
}
