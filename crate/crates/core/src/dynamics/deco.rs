use serde::{Deserialize, Serialize};

use super::{CommutationMode, MicroHamiltonian};
use crate::error::{Error, Result};
use crate::qcore::C64;
use crate::shells::RENORMALIZE_LIMIT;

/// Eigenvalues `E_AB` of a non-degenerate system, indexed by gas level `A`
/// and container level `B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyTable {
    n_gas: usize,
    n_container: usize,
    energies: Vec<f64>,
}

impl EnergyTable {
    /// Row-major `energies[A * n_container + B]`.
    pub fn new(n_gas: usize, n_container: usize, energies: Vec<f64>) -> Result<Self> {
        if n_gas == 0 || n_container == 0 {
            return Err(Error::Validation(
                "energy table needs at least one level per side".into(),
            ));
        }
        if energies.len() != n_gas * n_container {
            return Err(Error::Dimension {
                expected: n_gas * n_container,
                got: energies.len(),
            });
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::Validation("energies must be finite".into()));
        }
        Ok(Self {
            n_gas,
            n_container,
            energies,
        })
    }

    /// Uncoupled table `E_AB = E_A + E_B`.
    pub fn additive(gas: &[f64], container: &[f64]) -> Result<Self> {
        let e = gas.iter().flat_map(|a| container.iter().map(move |b| a + b)).collect();
        Self::new(gas.len(), container.len(), e)
    }

    /// Reads `E_AB` off the diagonal of a non-degenerate Hamiltonian, whose
    /// `(A, B)` blocks are all `1 × 1`.
    pub fn from_hamiltonian(h: &MicroHamiltonian) -> Result<Self> {
        let sys = h.system();
        if !sys.gas().is_nondegenerate() || !sys.container().is_nondegenerate() {
            return Err(Error::Contract(
                "the exact purity formula needs non-degenerate gas and container shells".into(),
            ));
        }
        if h.mode() != CommutationMode::Strict {
            return Err(Error::Contract(
                "the exact purity formula needs a coupling diagonal in the product basis".into(),
            ));
        }
        let n = h.dim();
        Self::new(
            sys.dim_g(),
            sys.dim_c(),
            (0..n).map(|k| h.matrix()[(k, k)].re).collect(),
        )
    }

    pub fn n_gas(&self) -> usize {
        self.n_gas
    }

    pub fn n_container(&self) -> usize {
        self.n_container
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.energies[a * self.n_container + b]
    }

    /// `E_AB - E_CB + E_CD - E_AD`.
    pub fn gap(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.get(a, b) - self.get(c, b) + self.get(c, d) - self.get(a, d)
    }
}

fn check_weights(name: &str, w: &[f64], expected: usize) -> Result<()> {
    if w.len() != expected {
        return Err(Error::Dimension { expected, got: w.len() });
    }
    if w.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::Validation(format!("{name} weights must be probabilities")));
    }
    let total: f64 = w.iter().sum();
    if (total - 1.0).abs() > RENORMALIZE_LIMIT {
        return Err(Error::Validation(format!("{name} weights sum to {total}, not 1")));
    }
    Ok(())
}

/// Gas purity at time `t` for a product initial state of a non-degenerate
/// system:
/// `Σ_{ABCD} exp(-i (E_AB - E_CB + E_CD - E_AD) t) P_A P_B P_C P_D`.
pub fn deco_purity(table: &EnergyTable, gas_weights: &[f64], container_weights: &[f64], t: f64) -> Result<f64> {
    check_weights("gas", gas_weights, table.n_gas)?;
    check_weights("container", container_weights, table.n_container)?;
    let mut acc = C64::new(0.0, 0.0);
    for (a, &pa) in gas_weights.iter().enumerate() {
        for (c, &pc) in gas_weights.iter().enumerate() {
            for (b, &pb) in container_weights.iter().enumerate() {
                for (d, &pd) in container_weights.iter().enumerate() {
                    let phase = -table.gap(a, b, c, d) * t;
                    acc += C64::from_polar(pa * pb * pc * pd, phase);
                }
            }
        }
    }
    Ok(acc.re)
}

/// One near-cancellation `|E_AB - E_CB + E_CD - E_AD| < tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceReport {
    pub tol: f64,
    /// Number of quadruples examined.
    pub checked: usize,
    pub resonances: Vec<Resonance>,
}

impl ResonanceReport {
    /// No oscillating term of the purity fails to oscillate.
    pub fn is_non_resonant(&self) -> bool {
        self.resonances.is_empty()
    }
}

/// Lists quadruples with `A ≠ C`, `B ≠ D` whose Bohr frequency is below
/// `tol`. Each is reported once, as `A < C`, `B < D`: the other orderings
/// give the same frequency up to sign.
pub fn resonance_check(table: &EnergyTable, tol: f64) -> ResonanceReport {
    let mut resonances = Vec::new();
    let mut checked = 0;
    for a in 0..table.n_gas {
        for c in a + 1..table.n_gas {
            for b in 0..table.n_container {
                for d in b + 1..table.n_container {
                    checked += 1;
                    let gap = table.gap(a, b, c, d);
                    if gap.abs() < tol {
                        resonances.push(Resonance { a, b, c, d, gap });
                    }
                }
            }
        }
    }
    ResonanceReport {
        tol,
        checked,
        resonances,
    }
}
