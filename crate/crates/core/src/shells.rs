//! Energy-shell bookkeeping and the closed-form purity and entropy results
//! for microcanonically constrained bipartite systems.
//!
//! A subsystem is described by its shells `(E_A, N_A, P_A)`: energy,
//! degeneracy and occupation probability. Every quantity here depends only on
//! degeneracies and weights; energies matter only for the dynamics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deviation of the weight sum from 1 that is accepted as-is.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;
/// Deviations below this are silently renormalized; larger ones are errors.
pub const RENORMALIZE_LIMIT: f64 = 1e-8;
/// Default upper bound on `dim_g * dim_c`.
pub const DEFAULT_MAX_DIMENSION: usize = 4096;
/// Default ratio for [`in_thermodynamic_regime`].
pub const DEFAULT_REGIME_RATIO: f64 = 10.0;

/// One energy eigenspace of a local Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shell {
    pub energy: f64,
    pub degeneracy: usize,
    pub weight: f64,
}

/// Shell structure of one subsystem, energies strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Shell>", into = "Vec<Shell>")]
pub struct ShellProfile {
    shells: Vec<Shell>,
}

impl ShellProfile {
    pub fn new(mut shells: Vec<Shell>) -> Result<Self> {
        if shells.is_empty() {
            return Err(Error::Validation("a shell profile needs at least one shell".into()));
        }
        for (k, s) in shells.iter().enumerate() {
            if s.degeneracy == 0 {
                return Err(Error::Validation(format!("shell {k}: degeneracy must be >= 1")));
            }
            if !s.energy.is_finite() {
                return Err(Error::Validation(format!("shell {k}: energy must be finite")));
            }
            if !(0.0..=1.0).contains(&s.weight) {
                return Err(Error::Validation(format!(
                    "shell {k}: weight {} outside [0, 1]",
                    s.weight
                )));
            }
        }
        if let Some(k) = shells.windows(2).position(|w| w[0].energy >= w[1].energy) {
            return Err(Error::Validation(format!(
                "shell energies must be strictly increasing (shells {k} and {})",
                k + 1
            )));
        }
        let total: f64 = shells.iter().map(|s| s.weight).sum();
        let dev = (total - 1.0).abs();
        if dev > RENORMALIZE_LIMIT {
            return Err(Error::Validation(format!("shell weights sum to {total}, not 1")));
        }
        if dev > WEIGHT_TOLERANCE {
            for s in &mut shells {
                s.weight /= total;
            }
        }
        Ok(Self { shells })
    }

    /// Shells with energies `0, 1, 2, …` from `(degeneracy, weight)` pairs.
    pub fn from_pairs(pairs: &[(usize, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .enumerate()
                .map(|(k, &(degeneracy, weight))| Shell {
                    energy: k as f64,
                    degeneracy,
                    weight,
                })
                .collect(),
        )
    }

    /// A single fully occupied shell of the given degeneracy.
    pub fn single(degeneracy: usize) -> Result<Self> {
        Self::from_pairs(&[(degeneracy, 1.0)])
    }

    /// Non-degenerate shells with the given weights.
    pub fn nondegenerate(weights: &[f64]) -> Result<Self> {
        Self::from_pairs(&weights.iter().map(|&w| (1, w)).collect::<Vec<_>>())
    }

    pub fn shells(&self) -> &[Shell] {
        &self.shells
    }

    pub fn len(&self) -> usize {
        self.shells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shells.is_empty()
    }

    /// Subsystem dimension, the sum of degeneracies.
    pub fn dim(&self) -> usize {
        self.shells.iter().map(|s| s.degeneracy).sum()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.shells.iter().map(|s| s.weight).collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.shells.iter().all(|s| s.degeneracy == 1)
    }

    /// Index ranges of each shell within the subsystem basis.
    pub fn ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.shells
            .iter()
            .map(|s| {
                let r = start..start + s.degeneracy;
                start = r.end;
                r
            })
            .collect()
    }

    /// Shell index of every basis state.
    pub fn shell_of_basis(&self) -> Vec<usize> {
        self.shells
            .iter()
            .enumerate()
            .flat_map(|(k, s)| std::iter::repeat_n(k, s.degeneracy))
            .collect()
    }

    /// Energy of every basis state.
    pub fn basis_energies(&self) -> Vec<f64> {
        self.shells
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.energy, s.degeneracy))
            .collect()
    }
}

impl TryFrom<Vec<Shell>> for ShellProfile {
    type Error = Error;

    fn try_from(shells: Vec<Shell>) -> Result<Self> {
        Self::new(shells)
    }
}

impl From<ShellProfile> for Vec<Shell> {
    fn from(p: ShellProfile) -> Self {
        p.shells
    }
}

/// Gas and container shell profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemProfile {
    gas: ShellProfile,
    container: ShellProfile,
}

impl SystemProfile {
    pub fn new(gas: ShellProfile, container: ShellProfile) -> Result<Self> {
        Self::with_max_dimension(gas, container, DEFAULT_MAX_DIMENSION)
    }

    pub fn with_max_dimension(gas: ShellProfile, container: ShellProfile, max_dimension: usize) -> Result<Self> {
        let dim = gas.dim().checked_mul(container.dim());
        match dim {
            Some(d) if d <= max_dimension => Ok(Self { gas, container }),
            _ => Err(Error::Config(format!(
                "total dimension {} x {} exceeds the configured maximum {max_dimension}",
                gas.dim(),
                container.dim()
            ))),
        }
    }

    /// Fully degenerate system: one shell on each side.
    pub fn degenerate(n_g: usize, n_c: usize) -> Result<Self> {
        Self::new(ShellProfile::single(n_g)?, ShellProfile::single(n_c)?)
    }

    pub fn gas(&self) -> &ShellProfile {
        &self.gas
    }

    pub fn container(&self) -> &ShellProfile {
        &self.container
    }

    pub fn dim_g(&self) -> usize {
        self.gas.dim()
    }

    pub fn dim_c(&self) -> usize {
        self.container.dim()
    }

    pub fn dim(&self) -> usize {
        self.dim_g() * self.dim_c()
    }

    /// The same system with gas and container exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            gas: self.container.clone(),
            container: self.gas.clone(),
        }
    }

    /// Product block weights `w_AB = P_A^g P_B^c`, row-major over `(A, B)`.
    pub fn block_weights(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.gas.len() * self.container.len());
        for g in self.gas.shells() {
            for c in self.container.shells() {
                out.push(g.weight * c.weight);
            }
        }
        out
    }
}

fn weighted_inverse_degeneracy(p: &ShellProfile) -> f64 {
    p.shells()
        .iter()
        .map(|s| s.weight * s.weight / s.degeneracy as f64)
        .sum()
}

fn sum_of_squares(p: &ShellProfile) -> f64 {
    p.shells().iter().map(|s| s.weight * s.weight).sum()
}

/// Smallest gas purity compatible with the gas shell weights,
/// `Σ_A (P_A)² / N_A`.
pub fn p_min(gas: &ShellProfile) -> f64 {
    weighted_inverse_degeneracy(gas)
}

/// Exact average of the gas purity over the constrained region.
pub fn average_purity_exact(sys: &SystemProfile) -> f64 {
    let (g, c) = (sys.gas(), sys.container());
    let a2 = sum_of_squares(g);
    let b2 = sum_of_squares(c);
    let mut cross = 0.0;
    for sa in g.shells() {
        let na = sa.degeneracy as f64;
        for sb in c.shells() {
            let nb = sb.degeneracy as f64;
            cross += sa.weight * sa.weight * sb.weight * sb.weight * (na + nb) / (na * nb + 1.0);
        }
    }
    weighted_inverse_degeneracy(g) * (1.0 - b2) + weighted_inverse_degeneracy(c) * (1.0 - a2) + cross
}

/// Large-degeneracy approximation `Σ_A P_A²/N_A + Σ_B P_B²/N_B`. Can exceed 1
/// outside its regime of validity.
pub fn average_purity_approx(sys: &SystemProfile) -> f64 {
    weighted_inverse_degeneracy(sys.gas()) + weighted_inverse_degeneracy(sys.container())
}

/// Average purity for two fully degenerate subsystems, `(n_g + n_c)/(n_g n_c + 1)`.
pub fn average_purity_degenerate(n_g: usize, n_c: usize) -> Result<f64> {
    if n_g == 0 || n_c == 0 {
        return Err(Error::Validation("dimensions must be >= 1".into()));
    }
    let (g, c) = (n_g as f64, n_c as f64);
    Ok((g + c) / (g * c + 1.0))
}

fn check_distribution(name: &str, w: &[f64]) -> Result<()> {
    if w.is_empty() || w.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::Validation(format!("{name} weights must be probabilities")));
    }
    let total: f64 = w.iter().sum();
    if (total - 1.0).abs() > RENORMALIZE_LIMIT {
        return Err(Error::Validation(format!("{name} weights sum to {total}, not 1")));
    }
    Ok(())
}

/// Long-time average of the gas purity for non-degenerate, non-resonant
/// spectra: `a + b - ab` with `a = Σ P_A²`, `b = Σ P_B²`.
pub fn time_average_nondegenerate(gas_weights: &[f64], container_weights: &[f64]) -> Result<f64> {
    check_distribution("gas", gas_weights)?;
    check_distribution("container", container_weights)?;
    let a: f64 = gas_weights.iter().map(|p| p * p).sum();
    let b: f64 = container_weights.iter().map(|p| p * p).sum();
    Ok(a + b - a * b)
}

/// Maximal gas entropy under fixed shell weights, `-Σ_A P_A ln(P_A / N_A)`.
pub fn s_max(gas: &ShellProfile) -> f64 {
    gas.shells()
        .iter()
        .filter(|s| s.weight > 0.0)
        .map(|s| s.weight * (s.degeneracy as f64 / s.weight).ln())
        .sum()
}

/// `Σ_B P_B² / N_B`; small when the container occupies large shells.
pub fn container_smallness(container: &ShellProfile) -> f64 {
    weighted_inverse_degeneracy(container)
}

/// True iff `p_min(gas) >= ratio_threshold * container_smallness(container)`.
pub fn in_thermodynamic_regime(sys: &SystemProfile, ratio_threshold: f64) -> bool {
    p_min(sys.gas()) >= ratio_threshold * container_smallness(sys.container())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn profile(pairs: &[(usize, f64)]) -> ShellProfile {
        ShellProfile::from_pairs(pairs).unwrap()
    }

    fn system(g: &[(usize, f64)], c: &[(usize, f64)]) -> SystemProfile {
        SystemProfile::new(profile(g), profile(c)).unwrap()
    }

    /// Euclidean projection onto `{x >= 0, Σx = total}`.
    fn project_simplex(v: &[f64], total: f64) -> Vec<f64> {
        let mut u = v.to_vec();
        u.sort_by(|a, b| b.total_cmp(a));
        let mut css = 0.0;
        let mut theta = 0.0;
        for (k, &x) in u.iter().enumerate() {
            css += x;
            let t = (css - total) / (k + 1) as f64;
            if x - t > 0.0 {
                theta = t;
            }
        }
        v.iter().map(|x| (x - theta).max(0.0)).collect()
    }

    /// Minimizes Σ λ² over block spectra with fixed block traces by projected
    /// gradient descent from a skewed start. Block-diagonal states in their
    /// eigenbasis have purity Σ λ², so this is the constrained minimum.
    fn numerical_min_purity(p: &ShellProfile) -> f64 {
        p.shells()
            .iter()
            .map(|s| {
                let n = s.degeneracy;
                let mut lam: Vec<f64> = (0..n).map(|k| if k == 0 { s.weight } else { 0.0 }).collect();
                for _ in 0..2000 {
                    let step: Vec<f64> = lam.iter().map(|x| x - 0.1 * 2.0 * x).collect();
                    lam = project_simplex(&step, s.weight);
                }
                lam.iter().map(|x| x * x).sum::<f64>()
            })
            .sum()
    }

    /// Maximizes -Σ λ ln λ over block spectra with fixed block traces by
    /// exponentiated-gradient ascent.
    fn numerical_max_entropy(p: &ShellProfile) -> f64 {
        p.shells()
            .iter()
            .filter(|s| s.weight > 0.0)
            .map(|s| {
                let n = s.degeneracy;
                let mut lam: Vec<f64> = (0..n).map(|k| s.weight * (k + 1) as f64).collect();
                let z: f64 = lam.iter().sum();
                lam.iter_mut().for_each(|x| *x *= s.weight / z);
                for _ in 0..5000 {
                    let g: Vec<f64> = lam.iter().map(|x| -(x.ln() + 1.0)).collect();
                    let mut next: Vec<f64> = lam.iter().zip(&g).map(|(x, gi)| x * (0.2 * gi).exp()).collect();
                    let z: f64 = next.iter().sum();
                    next.iter_mut().for_each(|x| *x *= s.weight / z);
                    lam = next;
                }
                lam.iter().map(|x| -x * x.ln()).sum::<f64>()
            })
            .sum()
    }

    #[test]
    fn profile_validation() {
        assert!(ShellProfile::new(vec![]).is_err());
        assert!(ShellProfile::from_pairs(&[(0, 1.0)]).is_err());
        assert!(ShellProfile::from_pairs(&[(1, 0.5), (1, 0.4)]).is_err());
        assert!(ShellProfile::from_pairs(&[(1, 1.2), (1, -0.2)]).is_err());
        let dup = vec![
            Shell {
                energy: 1.0,
                degeneracy: 1,
                weight: 0.5,
            },
            Shell {
                energy: 1.0,
                degeneracy: 1,
                weight: 0.5,
            },
        ];
        assert!(ShellProfile::new(dup).is_err());
    }

    #[test]
    fn small_weight_deviation_is_renormalized() {
        let p = ShellProfile::from_pairs(&[(1, 0.5 + 1e-9), (2, 0.5)]).unwrap();
        let total: f64 = p.weights().iter().sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_weight_shells_count_toward_dimension() {
        let p = profile(&[(3, 0.0), (2, 1.0)]);
        assert_eq!(p.dim(), 5);
        assert_abs_diff_eq!(p_min(&p), 0.5);
        assert_eq!(p.shell_of_basis(), vec![0, 0, 0, 1, 1]);
    }

    #[test]
    fn system_dimension_limit() {
        assert!(matches!(SystemProfile::degenerate(64, 128), Err(Error::Config(_))));
        SystemProfile::with_max_dimension(profile(&[(64, 1.0)]), profile(&[(128, 1.0)]), 8192).unwrap();
    }

    #[test]
    fn profile_json_round_trip() {
        let p = profile(&[(1, 0.25), (3, 0.75)]);
        let json = r#"[{"energy":0.0,"degeneracy":1,"weight":0.25},{"energy":1.0,"degeneracy":3,"weight":0.75}]"#;
        let parsed: ShellProfile = serde_json::from_str(json).unwrap();
        assert_eq!(parsed, p);
        assert_eq!(serde_json::to_string(&p).unwrap(), json);
        assert!(serde_json::from_str::<ShellProfile>(r#"[{"energy":0.0,"degeneracy":0,"weight":1.0}]"#).is_err());
    }

    #[test]
    fn p_min_examples() {
        assert_abs_diff_eq!(p_min(&profile(&[(1, 1.0)])), 1.0);
        assert_abs_diff_eq!(p_min(&profile(&[(8, 1.0)])), 0.125);
        let mixed = profile(&[(1, 0.5), (3, 0.5)]);
        assert_abs_diff_eq!(p_min(&mixed), 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(numerical_min_purity(&mixed), 1.0 / 3.0, epsilon = 1e-9);
    }

    #[test]
    fn p_min_matches_numerical_minimum() {
        for pairs in [
            vec![(2, 0.3), (5, 0.7)],
            vec![(1, 0.1), (4, 0.2), (3, 0.7)],
            vec![(6, 1.0)],
        ] {
            let p = profile(&pairs);
            assert_abs_diff_eq!(p_min(&p), numerical_min_purity(&p), epsilon = 1e-9);
            assert!(p_min(&p) >= 1.0 / p.dim() as f64 - 1e-15);
        }
    }

    #[test]
    fn p_min_is_purity_of_block_uniform_state() {
        let p = profile(&[(2, 0.3), (5, 0.6), (1, 0.1)]);
        let diag: Vec<f64> = p
            .shells()
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.weight / s.degeneracy as f64, s.degeneracy))
            .collect();
        let rho = crate::qcore::DensityMatrix::from_diagonal(&diag).unwrap();
        assert_abs_diff_eq!(p_min(&p), crate::qcore::purity(&rho), epsilon = 1e-15);
        assert_abs_diff_eq!(s_max(&p), crate::qcore::entropy(&rho).unwrap(), epsilon = 1e-14);
    }

    #[test]
    fn exact_average_examples() {
        assert_abs_diff_eq!(
            average_purity_exact(&system(&[(2, 1.0)], &[(2, 1.0)])),
            0.8,
            epsilon = 1e-15
        );
        assert_eq!(average_purity_exact(&system(&[(1, 1.0)], &[(1, 1.0)])), 1.0);
        let s = system(&[(1, 0.5), (1, 0.5)], &[(1, 0.5), (1, 0.5)]);
        assert_abs_diff_eq!(average_purity_exact(&s), 0.75, epsilon = 1e-15);
    }

    #[test]
    fn approx_average_examples() {
        let s = system(&[(16, 1.0)], &[(64, 1.0)]);
        assert_abs_diff_eq!(average_purity_approx(&s), 0.078125, epsilon = 1e-15);
        assert_abs_diff_eq!(average_purity_exact(&s), 80.0 / 1025.0, epsilon = 1e-15);
        assert!((average_purity_approx(&s) - average_purity_exact(&s)).abs() < 1.0 / (16.0 * 64.0));

        let tiny = system(&[(1, 1.0)], &[(1, 1.0)]);
        assert_eq!(average_purity_approx(&tiny), 2.0);
        assert!(!in_thermodynamic_regime(&tiny, DEFAULT_REGIME_RATIO));

        let s = system(&[(4, 0.5), (4, 0.5)], &[(256, 1.0)]);
        assert_abs_diff_eq!(average_purity_approx(&s), 0.125 + 1.0 / 256.0, epsilon = 1e-15);
        assert!((average_purity_approx(&s) - average_purity_exact(&s)).abs() < 1e-3);
    }

    #[test]
    fn degenerate_average_examples() {
        assert_abs_diff_eq!(average_purity_degenerate(2, 2).unwrap(), 0.8);
        assert_abs_diff_eq!(average_purity_degenerate(2, 4).unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        for n in 1..50 {
            assert_eq!(average_purity_degenerate(1, n).unwrap(), 1.0);
        }
        assert!(average_purity_degenerate(0, 3).is_err());
        for (g, c) in [(2, 2), (3, 7), (2, 8)] {
            let s = SystemProfile::degenerate(g, c).unwrap();
            assert_abs_diff_eq!(
                average_purity_exact(&s),
                average_purity_degenerate(g, c).unwrap(),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn nondegenerate_time_average_examples() {
        assert_eq!(time_average_nondegenerate(&[1.0], &[0.5, 0.5]).unwrap(), 1.0);
        assert_abs_diff_eq!(
            time_average_nondegenerate(&[0.5, 0.5], &[0.25; 4]).unwrap(),
            0.625,
            epsilon = 1e-15
        );
        assert!(time_average_nondegenerate(&[0.5, 0.4], &[1.0]).is_err());
        assert!(time_average_nondegenerate(&[], &[1.0]).is_err());
    }

    #[test]
    fn s_max_examples() {
        assert_abs_diff_eq!(s_max(&profile(&[(4, 1.0)])), 4f64.ln(), epsilon = 1e-15);
        let two = profile(&[(2, 0.5), (2, 0.5)]);
        assert_abs_diff_eq!(s_max(&two), 4f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(numerical_max_entropy(&two), 4f64.ln(), epsilon = 1e-9);
        assert_eq!(s_max(&profile(&[(1, 1.0)])).to_bits(), 0f64.to_bits());
        let p = profile(&[(3, 0.2), (1, 0.3), (5, 0.5)]);
        assert_abs_diff_eq!(s_max(&p), numerical_max_entropy(&p), epsilon = 1e-9);
        assert_abs_diff_eq!(s_max(&profile(&[(3, 0.0), (2, 1.0)])), 2f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn container_smallness_and_regime() {
        assert_abs_diff_eq!(container_smallness(&profile(&[(1024, 1.0)])), 1.0 / 1024.0);
        let c = profile(&[(64, 0.5), (64, 0.5)]);
        assert_abs_diff_eq!(container_smallness(&c), 0.0078125);
        let ratio = p_min(&profile(&[(1, 0.5), (3, 0.5)])) / container_smallness(&c);
        assert_abs_diff_eq!(ratio, 128.0 / 3.0, epsilon = 1e-12);

        assert!(in_thermodynamic_regime(&system(&[(2, 1.0)], &[(1000, 1.0)]), 10.0));
        assert!(!in_thermodynamic_regime(&system(&[(4, 1.0)], &[(4, 1.0)]), 10.0));
        assert!(in_thermodynamic_regime(
            &system(&[(1, 0.5), (3, 0.5)], &[(64, 1.0)]),
            10.0
        ));
    }

    fn arb_profile(max_shells: usize, max_deg: usize) -> impl Strategy<Value = ShellProfile> {
        prop::collection::vec((1..=max_deg, 0.0f64..1.0), 1..=max_shells).prop_map(|v| {
            let total: f64 = v.iter().map(|x| x.1).sum::<f64>() + 1e-3;
            let pairs: Vec<(usize, f64)> = v
                .iter()
                .map(|&(d, w)| (d, (w + 1e-3 / v.len() as f64) / total))
                .collect();
            ShellProfile::from_pairs(&pairs).unwrap()
        })
    }

    fn arb_system() -> impl Strategy<Value = SystemProfile> {
        (arb_profile(4, 40), arb_profile(4, 40))
            .prop_map(|(g, c)| SystemProfile::with_max_dimension(g, c, usize::MAX).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn exact_average_bounds(sys in arb_system()) {
            let avg = average_purity_exact(&sys);
            prop_assert!(avg >= p_min(sys.gas()) - 1e-15);
            prop_assert!(avg > 0.0 && avg <= 1.0 + 1e-15);
        }

        #[test]
        fn exact_average_is_exchange_symmetric(sys in arb_system()) {
            let a = average_purity_exact(&sys);
            let b = average_purity_exact(&sys.swapped());
            prop_assert!((a - b).abs() <= 1e-15);
        }

        #[test]
        fn approximation_error_bound(sys in arb_system()) {
            let (g, c) = (sys.gas(), sys.container());
            let diff = (average_purity_exact(&sys) - average_purity_approx(&sys)).abs();
            let mut bound = 0.0;
            for sa in g.shells() {
                for sb in c.shells() {
                    let (na, nb) = (sa.degeneracy as f64, sb.degeneracy as f64);
                    bound += sa.weight.powi(2) * sb.weight.powi(2) * (na + nb) / (na * nb);
                }
            }
            bound += p_min(g) * sum_of_squares(c) + container_smallness(c) * sum_of_squares(g);
            prop_assert!(diff <= bound + 1e-15);
        }

        #[test]
        fn unit_degeneracy_matches_time_average(g in arb_profile(5, 1), c in arb_profile(5, 1)) {
            let sys = SystemProfile::new(g.clone(), c.clone()).unwrap();
            let t = time_average_nondegenerate(&g.weights(), &c.weights()).unwrap();
            prop_assert!((average_purity_exact(&sys) - t).abs() <= 1e-15);
        }
    }

    #[test]
    fn exact_average_is_one_only_for_unique_state() {
        assert_eq!(average_purity_exact(&system(&[(1, 1.0)], &[(1, 1.0)])), 1.0);
        assert!(average_purity_exact(&system(&[(2, 1.0)], &[(1, 1.0)])) == 1.0);
        // a one-dimensional container leaves the gas pure, as does a one-dimensional gas
        assert!(average_purity_exact(&system(&[(2, 1.0)], &[(2, 1.0)])) < 1.0);
        assert!(average_purity_exact(&system(&[(1, 0.5), (1, 0.5)], &[(1, 0.5), (1, 0.5)])) < 1.0);
    }
}
