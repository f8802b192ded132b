use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sample_constrained_state, sample_stream, SampleConfig};
use crate::error::{Error, Result};
use crate::qcore::{entropy, purity, Subsystem};
use crate::shells::{
    container_smallness, in_thermodynamic_regime, s_max, Shell, ShellProfile, SystemProfile, DEFAULT_REGIME_RATIO,
};

/// Samples per work item. Fixed so that chunk boundaries, and hence the merge
/// order, do not depend on the worker count.
const CHUNK: usize = 512;

/// Lower histogram edge sits this far below `1/dim_g`.
const HISTOGRAM_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Observable {
    Purity,
    Entropy,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Observable::Purity => "purity",
            Observable::Entropy => "entropy",
        }
    }
}

/// Sample mean of an observable with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub observable: Observable,
    pub subsystem: Subsystem,
    pub mean: f64,
    /// Unbiased sample standard deviation over `√n`; `None` when `n = 1`.
    pub std_error: Option<f64>,
    pub n_samples: usize,
    pub min: f64,
    pub max: f64,
}

/// Streaming `(count, mean, M2)` accumulator.
#[derive(Debug, Clone, Copy)]
struct Moments {
    count: usize,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
}

impl Moments {
    fn new() -> Self {
        Self {
            count: 0,
            mean: 0.0,
            m2: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }

    fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let d = other.mean - self.mean;
        self.mean += d * other.count as f64 / n;
        self.m2 += other.m2 + d * d * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
    }

    fn finish(&self, observable: Observable, subsystem: Subsystem) -> EstimateResult {
        let std_error = (self.count > 1).then(|| {
            let var = self.m2 / (self.count - 1) as f64;
            (var.max(0.0) / self.count as f64).sqrt()
        });
        EstimateResult {
            observable,
            subsystem,
            mean: self.mean,
            std_error,
            n_samples: self.count,
            min: self.min,
            max: self.max,
        }
    }
}

/// Runs `work` on fixed-size index chunks on a pool of `worker_count`
/// threads and returns the per-chunk results in index order.
fn map_chunks<T, F>(cfg: &SampleConfig, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(Range<usize>) -> Result<T> + Sync,
{
    cfg.validate()?;
    let n_chunks = cfg.n_samples.div_ceil(CHUNK);
    let run = || {
        (0..n_chunks)
            .into_par_iter()
            .map(|c| work(c * CHUNK..((c + 1) * CHUNK).min(cfg.n_samples)))
            .collect::<Result<Vec<T>>>()
    };
    if cfg.worker_count == 1 {
        return (0..n_chunks)
            .map(|c| work(c * CHUNK..((c + 1) * CHUNK).min(cfg.n_samples)))
            .collect();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.worker_count)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?
        .install(run)
}

fn observe(state: &crate::qcore::StateVector, sub: Subsystem, obs: &[Observable], out: &mut [f64]) -> Result<()> {
    let rho = state.reduced(sub);
    for (o, slot) in obs.iter().zip(out.iter_mut()) {
        *slot = match o {
            Observable::Purity => purity(&rho),
            Observable::Entropy => entropy(&rho)?,
        };
    }
    Ok(())
}

/// Estimates several observables of one reduction from a single set of
/// constrained draws.
pub fn estimate_observables(
    sys: &SystemProfile,
    cfg: &SampleConfig,
    subsystem: Subsystem,
    observables: &[Observable],
) -> Result<Vec<EstimateResult>> {
    let chunks = map_chunks(cfg, |range| {
        let mut acc = vec![Moments::new(); observables.len()];
        let mut vals = vec![0.0; observables.len()];
        for i in range {
            let psi = sample_constrained_state(sys, &mut sample_stream(cfg.seed, i as u64))?;
            observe(&psi, subsystem, observables, &mut vals)?;
            acc.iter_mut().zip(&vals).for_each(|(m, &v)| m.push(v));
        }
        Ok(acc)
    })?;
    let mut total = vec![Moments::new(); observables.len()];
    for chunk in &chunks {
        total.iter_mut().zip(chunk).for_each(|(t, c)| t.merge(c));
    }
    Ok(total
        .iter()
        .zip(observables)
        .map(|(m, &o)| m.finish(o, subsystem))
        .collect())
}

/// Monte Carlo average of a gas-reduction observable over the allowed region.
pub fn estimate_average(sys: &SystemProfile, cfg: &SampleConfig, observable: Observable) -> Result<EstimateResult> {
    Ok(estimate_observables(sys, cfg, Subsystem::Gas, &[observable])?[0])
}

/// Distribution of the gas purity over the allowed region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub normalized_density: Vec<f64>,
    pub n_samples: usize,
    pub mean: f64,
}

impl Histogram {
    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    /// `(left, right)` edges of the most populated bin (first on ties).
    pub fn modal_bin(&self) -> (f64, f64) {
        let mut best = 0;
        for (k, &c) in self.counts.iter().enumerate() {
            if c > self.counts[best] {
                best = k;
            }
        }
        (self.bin_edges[best], self.bin_edges[best + 1])
    }

    /// `∫ density` over the bins.
    pub fn integral(&self) -> f64 {
        self.normalized_density
            .iter()
            .zip(self.bin_edges.windows(2))
            .map(|(d, e)| d * (e[1] - e[0]))
            .sum()
    }
}

/// Histogram of gas purity over `cfg.n_bins` uniform bins on
/// `[1/dim_g - 1e-9, 1]`.
pub fn purity_histogram(sys: &SystemProfile, cfg: &SampleConfig) -> Result<Histogram> {
    let lower = 1.0 / sys.dim_g() as f64 - HISTOGRAM_MARGIN;
    let n_bins = cfg.n_bins;
    let width = (1.0 - lower) / n_bins as f64;
    let chunks = map_chunks(cfg, |range| {
        let mut counts = vec![0u64; n_bins];
        let mut m = Moments::new();
        for i in range {
            let psi = sample_constrained_state(sys, &mut sample_stream(cfg.seed, i as u64))?;
            let p = purity(&psi.reduced(Subsystem::Gas));
            m.push(p);
            let k = ((p - lower) / width).floor();
            let k = if k < 0.0 { 0 } else { (k as usize).min(n_bins - 1) };
            counts[k] += 1;
        }
        Ok((counts, m))
    })?;
    let mut counts = vec![0u64; n_bins];
    let mut moments = Moments::new();
    for (c, m) in &chunks {
        counts.iter_mut().zip(c).for_each(|(a, b)| *a += b);
        moments.merge(m);
    }
    let bin_edges: Vec<f64> = (0..=n_bins)
        .map(|k| if k == n_bins { 1.0 } else { lower + k as f64 * width })
        .collect();
    let n = cfg.n_samples as f64;
    let normalized_density = counts
        .iter()
        .zip(bin_edges.windows(2))
        .map(|(&c, e)| c as f64 / (n * (e[1] - e[0])))
        .collect();
    Ok(Histogram {
        bin_edges,
        counts,
        normalized_density,
        n_samples: cfg.n_samples,
        mean: moments.mean,
    })
}

/// One point of an entropy-deficit scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapPoint {
    pub container_degeneracy: usize,
    pub container_smallness: f64,
    pub s_max: f64,
    pub mean_entropy: f64,
    /// `s_max - mean_entropy`.
    pub gap: f64,
    pub std_error: Option<f64>,
    /// False when the point lies outside the thermodynamic regime at the
    /// default ratio; the gap is still computed.
    pub in_regime: bool,
}

/// Mean entropy deficit of the gas for a sequence of single-shell containers
/// of the given degeneracies.
pub fn entropy_gap_scan(
    gas: &ShellProfile,
    container_degeneracies: &[usize],
    cfg: &SampleConfig,
) -> Result<Vec<GapPoint>> {
    let smax = s_max(gas);
    container_degeneracies
        .iter()
        .map(|&n| {
            let container = ShellProfile::new(vec![Shell {
                energy: 0.0,
                degeneracy: n,
                weight: 1.0,
            }])?;
            let smallness = container_smallness(&container);
            let sys = SystemProfile::new(gas.clone(), container)?;
            let est = estimate_average(&sys, cfg, Observable::Entropy)?;
            Ok(GapPoint {
                container_degeneracy: n,
                container_smallness: smallness,
                s_max: smax,
                mean_entropy: est.mean,
                gap: smax - est.mean,
                std_error: est.std_error,
                in_regime: in_thermodynamic_regime(&sys, DEFAULT_REGIME_RATIO),
            })
        })
        .collect()
}
