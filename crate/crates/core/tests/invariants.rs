use microcanon::sampling::{block_weights_of, gas_shell_weights_of, sample_stream};
use microcanon::{
    build_hamiltonian, entropy, evolve_observables, p_min, purity, s_max, sample_constrained_state,
    sample_product_state, Shell, ShellProfile, Subsystem, SystemProfile,
};
use proptest::prelude::*;

fn profile(shells: &[(usize, f64)]) -> ShellProfile {
    let total: f64 = shells.iter().map(|s| s.1).sum();
    ShellProfile::new(
        shells
            .iter()
            .enumerate()
            .map(|(k, &(degeneracy, w))| Shell {
                energy: k as f64,
                degeneracy,
                weight: w / total,
            })
            .collect(),
    )
    .unwrap()
}

fn arb_shells(max_deg: usize) -> impl Strategy<Value = Vec<(usize, f64)>> {
    prop::collection::vec((1..=max_deg, 0.05f64..1.0), 1..=3)
}

fn arb_system() -> impl Strategy<Value = SystemProfile> {
    (arb_shells(3), arb_shells(6)).prop_map(|(g, c)| SystemProfile::new(profile(&g), profile(&c)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sampled_states_respect_shell_bounds(sys in arb_system(), seed in any::<u64>()) {
        let psi = sample_constrained_state(&sys, &mut sample_stream(seed, 0)).unwrap();
        prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        for (w, want) in block_weights_of(&sys, &psi).iter().zip(sys.block_weights()) {
            prop_assert!((w - want).abs() < 1e-12);
        }
        let (g, c) = (psi.reduced(Subsystem::Gas), psi.reduced(Subsystem::Container));
        prop_assert!(purity(&g) >= p_min(sys.gas()) - 1e-10);
        prop_assert!(entropy(&g).unwrap() <= s_max(sys.gas()) + 1e-10);
        prop_assert!((purity(&g) - purity(&c)).abs() < 1e-10);
        prop_assert!((entropy(&g).unwrap() - entropy(&c).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn trajectories_stay_above_the_floor(sys in arb_system(), seed in any::<u64>(), lambda in 0.0f64..2.0) {
        let h = build_hamiltonian(&sys, lambda, &mut sample_stream(seed, 0)).unwrap();
        let psi = sample_constrained_state(&sys, &mut sample_stream(seed, 1)).unwrap();
        let floor = p_min(&profile(
            &sys.gas().shells().iter().zip(gas_shell_weights_of(&sys, &psi)).map(|(s, w)| (s.degeneracy, w)).collect::<Vec<_>>(),
        ));
        let times: Vec<f64> = (0..40).map(|k| k as f64 * 2.5).collect();
        let ts = evolve_observables(&h, &psi, &times).unwrap();
        prop_assert!(ts.purity.iter().all(|&p| p >= floor - 1e-10));
        prop_assert!(ts.max_block_weight_drift() < 1e-11);
        prop_assert!(ts.total_purity.iter().all(|p| (p - 1.0).abs() < 1e-11));
    }

    #[test]
    fn uncoupled_product_states_stay_pure(sys in arb_system(), seed in any::<u64>()) {
        let h = build_hamiltonian(&sys, 0.0, &mut sample_stream(seed, 0)).unwrap();
        let psi = sample_product_state(&sys, &mut sample_stream(seed, 1)).unwrap();
        let times: Vec<f64> = (0..20).map(|k| k as f64 * 7.3).collect();
        let ts = evolve_observables(&h, &psi, &times).unwrap();
        prop_assert!(ts.purity.iter().all(|p| (p - 1.0).abs() < 1e-12));
        prop_assert!(ts.entropy.iter().all(|s| s.abs() < 1e-10));
    }
}
