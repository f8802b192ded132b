//! The four subcommands. Each returns the files it produced and the lines it
//! wants printed; writing and the manifest are handled by [`crate::run`].

use microcanon::dynamics::{build_hamiltonian_with, CommutationMode, EnergyTable};
use microcanon::sampling::{block_weights_of, sample_stream};
use microcanon::shells::DEFAULT_REGIME_RATIO;
use microcanon::{
    average_purity_approx, average_purity_degenerate, average_purity_exact, container_smallness, effective_velocity,
    estimate_observables, evolve_observables, in_thermodynamic_regime, p_min, purity_histogram, resonance_check, s_max,
    sample_constrained_state, sample_product_state, time_average_nondegenerate, time_averages, SampleConfig,
    StateVector, Subsystem, SystemProfile,
};
use serde_json::json;

use crate::config::{InitialSpec, OutputFormat, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{self, fmt_g17, OutputFile, Quantity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analytic,
    Sample,
    Evolve,
    Histogram,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analytic => "analytic",
            Command::Sample => "sample",
            Command::Evolve => "evolve",
            Command::Histogram => "histogram",
        }
    }
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<OutputFile>,
    pub report: Vec<String>,
    pub warnings: Vec<String>,
}

fn missing(section: &str) -> CliError {
    CliError::Config(format!("missing section `{section}` required by this command"))
}

fn emit(
    out: &mut Outcome,
    format: OutputFormat,
    stem: &str,
    csv: impl FnOnce() -> String,
    json: impl FnOnce() -> serde_json::Value,
) {
    if format.csv() {
        out.files.push(OutputFile::new(&format!("{stem}.csv"), csv()));
    }
    if format.json() {
        out.files.push(OutputFile::json(&format!("{stem}.json"), &json()));
    }
}

fn regime_warning(sys: &SystemProfile) -> Option<String> {
    (!in_thermodynamic_regime(sys, DEFAULT_REGIME_RATIO)).then(|| {
        format!(
            "system is outside the thermodynamic regime (p_min / container_smallness = {} < {}); approximate averages may be inaccurate",
            fmt_g17(p_min(sys.gas()) / container_smallness(sys.container())),
            DEFAULT_REGIME_RATIO
        )
    })
}

/// Closed-form quantities for the configured system.
pub fn analytic_rows(sys: &SystemProfile) -> Result<Vec<(String, Quantity)>> {
    let (g, c) = (sys.gas(), sys.container());
    let mut rows = vec![
        ("p_min".to_string(), Quantity::Number(p_min(g))),
        (
            "average_purity_exact".to_string(),
            Quantity::Number(average_purity_exact(sys)),
        ),
        (
            "average_purity_approx".to_string(),
            Quantity::Number(average_purity_approx(sys)),
        ),
    ];
    if g.len() == 1 && c.len() == 1 {
        let v = average_purity_degenerate(g.dim(), c.dim())?;
        rows.push(("average_purity_degenerate".into(), Quantity::Number(v)));
    }
    if g.is_nondegenerate() && c.is_nondegenerate() {
        let v = time_average_nondegenerate(&g.weights(), &c.weights())?;
        rows.push(("time_average_nondegenerate".into(), Quantity::Number(v)));
    }
    let smallness = container_smallness(c);
    rows.push(("s_max".into(), Quantity::Number(s_max(g))));
    rows.push(("container_smallness".into(), Quantity::Number(smallness)));
    rows.push(("regime_ratio".into(), Quantity::Number(p_min(g) / smallness)));
    rows.push(("regime_threshold".into(), Quantity::Number(DEFAULT_REGIME_RATIO)));
    rows.push((
        "in_thermodynamic_regime".into(),
        Quantity::Flag(in_thermodynamic_regime(sys, DEFAULT_REGIME_RATIO)),
    ));
    Ok(rows)
}

fn report_rows(rows: &[(String, Quantity)]) -> Vec<String> {
    rows.iter()
        .map(|(k, q)| match q {
            Quantity::Number(x) => format!("{k:<28} {}", fmt_g17(*x)),
            Quantity::Flag(b) => format!("{k:<28} {b}"),
        })
        .collect()
}

pub fn analytic(cfg: &RunConfig) -> Result<Outcome> {
    let sys = cfg.system_profile()?;
    let rows = analytic_rows(&sys)?;
    let mut out = Outcome {
        report: report_rows(&rows),
        ..Outcome::default()
    };
    out.warnings.extend(regime_warning(&sys));
    emit(
        &mut out,
        cfg.output.format,
        "analytic",
        || output::table_csv(&rows),
        || output::table_json(cfg.seed, &rows),
    );
    Ok(out)
}

pub fn sample(cfg: &RunConfig) -> Result<Outcome> {
    let section = cfg.sample.as_ref().ok_or_else(|| missing("sample"))?;
    let sys = cfg.system_profile()?;
    if section.observables.is_empty() {
        return Err(CliError::Config(
            "field `sample.observables`: at least one observable required".into(),
        ));
    }
    let sc = SampleConfig::new(cfg.seed, section.n_samples)
        .with_workers(section.workers)
        .with_bins(section.bins);
    sc.validate()?;
    let results = estimate_observables(&sys, &sc, Subsystem::Gas, &section.observables)?;

    let mut out = Outcome::default();
    for r in &results {
        let se = r.std_error.map_or_else(|| output::NOT_AVAILABLE.to_string(), fmt_g17);
        out.report.push(format!(
            "{:<8} mean {}  std_error {}  n {}",
            r.observable.name(),
            fmt_g17(r.mean),
            se,
            r.n_samples
        ));
    }
    emit(
        &mut out,
        cfg.output.format,
        "estimates",
        || output::estimates_csv(&results),
        || output::estimates_json(cfg.seed, &results),
    );

    if section.histogram {
        let h = purity_histogram(&sys, &sc)?;
        emit(
            &mut out,
            cfg.output.format,
            "histogram",
            || output::histogram_csv(&h),
            || output::histogram_json(cfg.seed, &h),
        );
    }
    if section.compare_analytic {
        let rows = analytic_rows(&sys)?;
        out.report.push("analytic predictions:".into());
        out.report.extend(report_rows(&rows));
        out.warnings.extend(regime_warning(&sys));
        emit(
            &mut out,
            cfg.output.format,
            "analytic",
            || output::table_csv(&rows),
            || output::table_json(cfg.seed, &rows),
        );
    }
    Ok(out)
}

/// Gas and container shell marginals of a state's block weights.
fn marginals(sys: &SystemProfile, psi: &StateVector) -> (Vec<f64>, Vec<f64>) {
    let nb = sys.container().len();
    let w = block_weights_of(sys, psi);
    let mut gas = vec![0.0; sys.gas().len()];
    let mut container = vec![0.0; nb];
    for (k, x) in w.iter().enumerate() {
        gas[k / nb] += x;
        container[k % nb] += x;
    }
    (gas, container)
}

pub fn evolve(cfg: &RunConfig) -> Result<Outcome> {
    let section = cfg.evolve.as_ref().ok_or_else(|| missing("evolve"))?;
    let sys = cfg.system_profile()?;
    if !(section.t_max.is_finite() && section.t_max > 0.0) {
        return Err(CliError::Config(format!(
            "field `evolve.t_max`: must be positive, got {}",
            section.t_max
        )));
    }
    if section.n_steps == 0 {
        return Err(CliError::Config("field `evolve.n_steps`: must be at least 1".into()));
    }
    if !(section.resonance_tol.is_finite() && section.resonance_tol >= 0.0) {
        return Err(CliError::Config(
            "field `evolve.resonance_tol`: must be non-negative".into(),
        ));
    }
    let average_steps = section.average_steps.unwrap_or(section.n_steps.max(100));
    if average_steps < 100 {
        return Err(CliError::Config(format!(
            "field `evolve.average_steps`: must be >= 100, got {average_steps}"
        )));
    }
    let mode = if section.relax_container_commutation {
        CommutationMode::GasOnly
    } else {
        CommutationMode::Strict
    };
    let h = build_hamiltonian_with(&sys, section.coupling, mode, &mut sample_stream(cfg.seed, 0))?;
    let mut rng = sample_stream(cfg.seed, 1);
    let psi0 = match section.initial {
        InitialSpec::Product => sample_product_state(&sys, &mut rng)?,
        InitialSpec::Constrained => sample_constrained_state(&sys, &mut rng)?,
        InitialSpec::Eigenstate { index } => {
            if index >= h.dim() {
                return Err(CliError::Config(format!(
                    "field `evolve.initial.index`: {index} out of range for dimension {}",
                    h.dim()
                )));
            }
            let v = h.eigensystem().eigenvectors().column(index).into_owned();
            StateVector::normalized(v, sys.dim_g(), sys.dim_c())?
        }
    };

    let n = section.n_steps;
    let times: Vec<f64> = (0..=n).map(|k| k as f64 * section.t_max / n as f64).collect();
    let ts = evolve_observables(&h, &psi0, &times)?;
    let avg = time_averages(&h, &psi0, section.t_max, average_steps)?;
    let v_eff = effective_velocity(&h, &psi0)?;
    let drift = ts.max_block_weight_drift();

    let (gw, cw) = marginals(&sys, &psi0);
    let floor = p_min(sys.gas());
    let mut comparison = vec![json!({
        "quantity": "average_purity_exact",
        "predicted": average_purity_exact(&sys),
        "observed": avg.purity,
        "deviation": avg.purity - average_purity_exact(&sys),
    })];
    comparison.push(json!({
        "quantity": "average_purity_approx",
        "predicted": average_purity_approx(&sys),
        "observed": avg.purity,
        "deviation": avg.purity - average_purity_approx(&sys),
    }));
    let nondegenerate = sys.gas().is_nondegenerate() && sys.container().is_nondegenerate();
    if nondegenerate {
        let pred = time_average_nondegenerate(&gw, &cw)?;
        comparison.push(json!({
            "quantity": "time_average_nondegenerate",
            "predicted": pred,
            "observed": avg.purity,
            "deviation": avg.purity - pred,
        }));
    }
    let resonance = if nondegenerate && mode == CommutationMode::Strict {
        let table = EnergyTable::from_hamiltonian(&h)?;
        Some(resonance_check(&table, section.resonance_tol))
    } else {
        None
    };

    let summary = json!({
        "seed": cfg.seed,
        "coupling": section.coupling,
        "commutation": if mode == CommutationMode::Strict { "strict" } else { "gas_only" },
        "t_max": section.t_max,
        "average_steps": average_steps,
        "time_average_purity": avg.purity,
        "time_average_entropy": avg.entropy,
        "v_eff": v_eff,
        "max_block_weight_drift": drift,
        "initial_gas_shell_weights": gw,
        "initial_container_shell_weights": cw,
        "p_min": floor,
        "min_purity_on_grid": ts.purity.iter().copied().fold(f64::INFINITY, f64::min),
        "comparison": comparison,
        "resonance": resonance,
        "non_resonant": resonance.as_ref().map(|r| r.is_non_resonant()),
    });

    let mut out = Outcome::default();
    out.warnings.extend(regime_warning(&sys));
    out.report
        .push(format!("time_average_purity   {}", fmt_g17(avg.purity)));
    out.report
        .push(format!("time_average_entropy  {}", fmt_g17(avg.entropy)));
    out.report.push(format!("v_eff                 {}", fmt_g17(v_eff)));
    out.report.push(format!("block_weight_drift    {}", fmt_g17(drift)));
    if let Some(r) = &resonance {
        out.report.push(format!(
            "resonances            {} of {} quadruples",
            r.resonances.len(),
            r.checked
        ));
        if !r.is_non_resonant() {
            out.warnings
                .push("spectrum has resonant quadruples; the non-degenerate prediction does not apply exactly".into());
        }
    }
    emit(
        &mut out,
        cfg.output.format,
        "trajectory",
        || output::trajectory_csv(&ts),
        || output::trajectory_json(cfg.seed, &ts),
    );
    out.files.push(OutputFile::json("summary.json", &summary));
    Ok(out)
}

pub fn histogram(cfg: &RunConfig) -> Result<Outcome> {
    let section = cfg.histogram.as_ref().ok_or_else(|| missing("histogram"))?;
    let sys = cfg.system_profile()?;
    let sc = SampleConfig::new(cfg.seed, section.n_samples)
        .with_workers(section.workers)
        .with_bins(section.bins);
    sc.validate()?;
    let h = purity_histogram(&sys, &sc)?;
    let (lo, hi) = h.modal_bin();
    let mut out = Outcome::default();
    out.report.push(format!("mean purity  {}", fmt_g17(h.mean)));
    out.report
        .push(format!("modal bin    [{}, {})", fmt_g17(lo), fmt_g17(hi)));
    emit(
        &mut out,
        cfg.output.format,
        "histogram",
        || output::histogram_csv(&h),
        || output::histogram_json(cfg.seed, &h),
    );
    Ok(out)
}
