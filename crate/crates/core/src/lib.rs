//! Simulation and verification toolkit for microcanonically constrained
//! bipartite quantum systems.
//!
//! A "gas" subsystem exchanges no energy with its "container" environment:
//! both carry energy shells whose occupation probabilities are constants of
//! motion. The crate provides
//!
//! * [`qcore`]: states, density matrices, partial trace, purity, entropy,
//!   Hermitian eigendecomposition and exact propagation;
//! * [`shells`]: shell profiles and the closed-form purity averages, purity
//!   floor and maximal entropy;
//! * [`sampling`]: uniform sampling of the constrained region with
//!   reproducible, worker-count independent Monte Carlo estimates;
//! * [`dynamics`]: constrained Hamiltonians, trajectories, conservation
//!   checks, the exact non-degenerate purity and time averages.

pub mod dynamics;
pub mod error;
pub mod qcore;
pub mod sampling;
pub mod shells;

pub use dynamics::{
    build_hamiltonian, build_hamiltonian_with, deco_purity, effective_velocity, evolve_observables, resonance_check,
    time_average_purity, time_averages, CommutationMode, EnergyTable, MicroHamiltonian, ResonanceReport, TimeAverages,
    TimeSeries,
};
pub use error::{Error, Result};
pub use qcore::{
    density_from_state, entropy, hermitian_eigendecompose, partial_trace, propagate, purity, DensityMatrix,
    EigenSystem, StateVector, Subsystem, C64,
};
pub use sampling::{
    entropy_gap_scan, estimate_average, estimate_observables, purity_histogram, sample_constrained_state,
    sample_product_state, EstimateResult, GapPoint, Histogram, Observable, SampleConfig,
};
pub use shells::{
    average_purity_approx, average_purity_degenerate, average_purity_exact, container_smallness,
    in_thermodynamic_regime, p_min, s_max, time_average_nondegenerate, Shell, ShellProfile, SystemProfile,
};
