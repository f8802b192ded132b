//! Run configuration: one JSON document per run.

use std::path::{Path, PathBuf};

use microcanon::{Observable, Shell, ShellProfile, SystemProfile};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub system: SystemSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolve: Option<EvolveSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram: Option<HistogramSection>,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub gas: Vec<ShellSpec>,
    pub container: Vec<ShellSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_dimension: Option<usize>,
}

/// One shell; `energy` defaults to the shell's position `0, 1, 2, …`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShellSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    pub degeneracy: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSection {
    pub n_samples: usize,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_observables")]
    pub observables: Vec<Observable>,
    /// Also write `histogram.csv` from the same seed.
    #[serde(default)]
    pub histogram: bool,
    #[serde(default = "default_bins")]
    pub bins: usize,
    /// Print closed-form predictions next to the estimates.
    #[serde(default)]
    pub compare_analytic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveSection {
    pub coupling: f64,
    pub initial: InitialSpec,
    pub t_max: f64,
    pub n_steps: usize,
    /// Quadrature cells for the time average; defaults to `max(n_steps, 100)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub average_steps: Option<usize>,
    #[serde(default)]
    pub relax_container_commutation: bool,
    #[serde(default = "default_resonance_tol")]
    pub resonance_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSpec {
    Product,
    Constrained,
    Eigenstate { index: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramSection {
    pub n_samples: usize,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_bins")]
    pub bins: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            format: OutputFormat::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Both,
}

impl OutputFormat {
    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

fn default_workers() -> usize {
    1
}

fn default_bins() -> usize {
    100
}

fn default_observables() -> Vec<Observable> {
    vec![Observable::Purity, Observable::Entropy]
}

fn default_resonance_tol() -> f64 {
    1e-9
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Scalar overrides from the command line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl RunConfig {
    /// Parses JSON, reporting the failing field path, line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            CliError::Config(format!(
                "field `{path}`: {inner} (line {}, column {})",
                inner.line(),
                inner.column()
            ))
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(out) = &o.out {
            self.output.dir = out.clone();
        }
        if let Some(w) = o.workers {
            if let Some(s) = &mut self.sample {
                s.workers = w;
            }
            if let Some(h) = &mut self.histogram {
                h.workers = w;
            }
        }
    }

    /// Fills omitted shell energies with `0, 1, 2, …`.
    pub fn resolve_energies(&mut self) {
        for shells in [&mut self.system.gas, &mut self.system.container] {
            for (k, s) in shells.iter_mut().enumerate() {
                s.energy.get_or_insert(k as f64);
            }
        }
    }

    pub fn system_profile(&self) -> Result<SystemProfile> {
        let gas = shell_profile(&self.system.gas, "system.gas")?;
        let container = shell_profile(&self.system.container, "system.container")?;
        let max = self
            .system
            .max_dimension
            .unwrap_or(microcanon::shells::DEFAULT_MAX_DIMENSION);
        SystemProfile::with_max_dimension(gas, container, max)
            .map_err(|e| CliError::Config(format!("field `system`: {e}")))
    }
}

fn shell_profile(specs: &[ShellSpec], field: &str) -> Result<ShellProfile> {
    let shells = specs
        .iter()
        .enumerate()
        .map(|(k, s)| Shell {
            energy: s.energy.unwrap_or(k as f64),
            degeneracy: s.degeneracy,
            weight: s.weight,
        })
        .collect();
    ShellProfile::new(shells).map_err(|e| CliError::Config(format!("field `{field}`: {e}")))
}
