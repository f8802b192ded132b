//! Config-driven batch runner for the `microcanon` toolkit.
//!
//! A run reads one JSON config, executes a subcommand, writes its data files
//! into the configured output directory and records them in `manifest.json`.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use commands::{Command, Outcome};
pub use config::{Overrides, RunConfig};
pub use error::{CliError, Result};
pub use manifest::RunManifest;

/// What a completed run wrote and wants to tell the user.
#[derive(Debug)]
pub struct RunReport {
    pub dir: PathBuf,
    pub manifest: RunManifest,
    pub report: Vec<String>,
    pub warnings: Vec<String>,
}

/// Runs `command` on an already parsed config.
pub fn execute(command: Command, mut cfg: RunConfig, overrides: &Overrides) -> Result<RunReport> {
    let start = Instant::now();
    cfg.apply(overrides);
    cfg.resolve_energies();
    let outcome = match command {
        Command::Analytic => commands::analytic(&cfg)?,
        Command::Sample => commands::sample(&cfg)?,
        Command::Evolve => commands::evolve(&cfg)?,
        Command::Histogram => commands::histogram(&cfg)?,
    };
    let dir = cfg.output.dir.clone();
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    for f in &outcome.files {
        let path = dir.join(&f.name);
        std::fs::write(&path, &f.bytes).map_err(|e| CliError::io(&path, e))?;
    }
    let manifest = RunManifest::new(command.name(), &cfg, start.elapsed().as_secs_f64(), &outcome.files);
    let path = dir.join(manifest::MANIFEST_FILE);
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(RunReport {
        dir,
        manifest,
        report: outcome.report,
        warnings: outcome.warnings,
    })
}

/// Loads the config at `path` and runs `command` on it.
pub fn run(command: Command, path: &Path, overrides: &Overrides) -> Result<RunReport> {
    execute(command, RunConfig::load(path)?, overrides)
}
