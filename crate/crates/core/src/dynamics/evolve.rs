use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::MicroHamiltonian;
use crate::error::{Error, Result};
use crate::qcore::{entropy, purity, StateVector, Subsystem, C64, NORM_TOLERANCE};
use crate::sampling::block_weights_of;

/// Fractional offset of the quadrature nodes within each grid cell.
const GOLDEN_OFFSET: f64 = 0.618_033_988_749_894_8;

/// Observable recorded along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesTag {
    Purity,
    Entropy,
    TotalPurity,
    Velocity,
    BlockWeight(usize, usize),
}

/// Observables sampled on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    /// Gas-reduction purity.
    pub purity: Vec<f64>,
    /// Gas-reduction entropy in nats.
    pub entropy: Vec<f64>,
    pub total_purity: Vec<f64>,
    /// `‖H ψ(t)‖`.
    pub velocity: Vec<f64>,
    /// One series per shell pair `(A, B)`, row-major.
    pub block_weights: Vec<((usize, usize), Vec<f64>)>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn get(&self, tag: SeriesTag) -> Option<&[f64]> {
        match tag {
            SeriesTag::Purity => Some(&self.purity),
            SeriesTag::Entropy => Some(&self.entropy),
            SeriesTag::TotalPurity => Some(&self.total_purity),
            SeriesTag::Velocity => Some(&self.velocity),
            SeriesTag::BlockWeight(a, b) => self
                .block_weights
                .iter()
                .find(|(k, _)| *k == (a, b))
                .map(|(_, v)| v.as_slice()),
        }
    }

    /// Largest excursion of each block weight from its initial value.
    pub fn max_block_weight_drift(&self) -> f64 {
        self.block_weights
            .iter()
            .flat_map(|(_, v)| v.iter().map(move |x| (x - v[0]).abs()))
            .fold(0.0, f64::max)
    }
}

/// Initial state expanded in the eigenbasis, ready for evaluation at any t.
pub(crate) struct Trajectory<'a> {
    h: &'a MicroHamiltonian,
    coeffs: DVector<C64>,
    psi0: &'a StateVector,
}

impl<'a> Trajectory<'a> {
    pub(crate) fn new(h: &'a MicroHamiltonian, psi0: &'a StateVector) -> Result<Self> {
        let sys = h.system();
        if psi0.dim_g() != sys.dim_g() || psi0.dim_c() != sys.dim_c() {
            return Err(Error::Dimension {
                expected: h.dim(),
                got: psi0.dim(),
            });
        }
        let norm = psi0.norm_sqr().sqrt();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Validation(format!("initial state norm {norm} is not 1")));
        }
        let coeffs = h.eigensystem().eigenvectors().ad_mul(psi0.amplitudes());
        Ok(Self { h, coeffs, psi0 })
    }

    pub(crate) fn at(&self, t: f64) -> StateVector {
        if t == 0.0 {
            return self.psi0.clone();
        }
        let es = self.h.eigensystem();
        let phased = DVector::from_fn(self.coeffs.len(), |k, _| {
            self.coeffs[k] * C64::from_polar(1.0, -es.eigenvalues()[k] * t)
        });
        StateVector::new(es.eigenvectors() * phased, self.psi0.dim_g(), self.psi0.dim_c())
            .expect("propagated state keeps its dimensions")
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::Validation("times must be finite".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Validation("times must be strictly increasing".into()));
    }
    Ok(())
}

/// Exact trajectory of gas purity, gas entropy, block weights, total purity
/// and speed on the given time grid.
pub fn evolve_observables(h: &MicroHamiltonian, psi0: &StateVector, times: &[f64]) -> Result<TimeSeries> {
    check_times(times)?;
    let traj = Trajectory::new(h, psi0)?;
    let sys = h.system();
    let rows: Vec<(f64, f64, f64, f64, Vec<f64>)> = times
        .par_iter()
        .map(|&t| {
            let psi = traj.at(t);
            let rho = psi.reduced(Subsystem::Gas);
            let s = entropy(&rho)?;
            let speed = (h.matrix() * psi.amplitudes()).norm();
            let norm2 = psi.norm_sqr();
            Ok((purity(&rho), s, norm2 * norm2, speed, block_weights_of(sys, &psi)))
        })
        .collect::<Result<_>>()?;

    let nb = sys.container().len();
    let mut block_weights: Vec<((usize, usize), Vec<f64>)> = (0..sys.gas().len() * nb)
        .map(|k| ((k / nb, k % nb), Vec::with_capacity(times.len())))
        .collect();
    let mut ts = TimeSeries {
        times: times.to_vec(),
        purity: Vec::with_capacity(times.len()),
        entropy: Vec::with_capacity(times.len()),
        total_purity: Vec::with_capacity(times.len()),
        velocity: Vec::with_capacity(times.len()),
        block_weights: Vec::new(),
    };
    for (p, s, tp, v, bw) in rows {
        ts.purity.push(p);
        ts.entropy.push(s);
        ts.total_purity.push(tp);
        ts.velocity.push(v);
        for (series, w) in block_weights.iter_mut().zip(bw) {
            series.1.push(w);
        }
    }
    ts.block_weights = block_weights;
    Ok(ts)
}

/// Gas purity along the trajectory at arbitrary times.
pub(crate) fn gas_purities(h: &MicroHamiltonian, psi0: &StateVector, times: &[f64]) -> Result<Vec<f64>> {
    let traj = Trajectory::new(h, psi0)?;
    Ok(times
        .par_iter()
        .map(|&t| purity(&traj.at(t).reduced(Subsystem::Gas)))
        .collect())
}

fn averaging_nodes(t_max: f64, n_steps: usize) -> Result<Vec<f64>> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::Validation(format!(
            "averaging time must be positive, got {t_max}"
        )));
    }
    if n_steps < 100 {
        return Err(Error::Validation(format!("n_steps must be >= 100, got {n_steps}")));
    }
    let dt = t_max / n_steps as f64;
    Ok((0..n_steps).map(|k| (k as f64 + GOLDEN_OFFSET) * dt).collect())
}

/// Time average of the gas purity over `[0, T]` by a uniform `n_steps`-cell
/// grid. Nodes sit at `(k + φ) T / n_steps` with `φ` the golden-ratio
/// fraction, which keeps them off any commensurate Bohr period.
pub fn time_average_purity(h: &MicroHamiltonian, psi0: &StateVector, t_max: f64, n_steps: usize) -> Result<f64> {
    let times = averaging_nodes(t_max, n_steps)?;
    let values = gas_purities(h, psi0, &times)?;
    Ok(values.iter().sum::<f64>() / n_steps as f64)
}

/// Time-averaged gas purity and entropy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeAverages {
    pub purity: f64,
    pub entropy: f64,
}

/// Same quadrature as [`time_average_purity`], also averaging the entropy.
pub fn time_averages(h: &MicroHamiltonian, psi0: &StateVector, t_max: f64, n_steps: usize) -> Result<TimeAverages> {
    let times = averaging_nodes(t_max, n_steps)?;
    let traj = Trajectory::new(h, psi0)?;
    let values: Vec<(f64, f64)> = times
        .par_iter()
        .map(|&t| {
            let rho = traj.at(t).reduced(Subsystem::Gas);
            Ok((purity(&rho), entropy(&rho)?))
        })
        .collect::<Result<_>>()?;
    let n = n_steps as f64;
    Ok(TimeAverages {
        purity: values.iter().map(|v| v.0).sum::<f64>() / n,
        entropy: values.iter().map(|v| v.1).sum::<f64>() / n,
    })
}

/// `√⟨ψ0|H²|ψ0⟩`, the constant speed of the state along its trajectory.
pub fn effective_velocity(h: &MicroHamiltonian, psi0: &StateVector) -> Result<f64> {
    if psi0.dim() != h.dim() {
        return Err(Error::Dimension {
            expected: h.dim(),
            got: psi0.dim(),
        });
    }
    Ok((h.matrix() * psi0.amplitudes()).norm())
}
