use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::OutputFile;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const TOOLKIT: &str = "microcanon";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputRecord {
    pub file: String,
    pub bytes: u64,
    /// Lowercase hex SHA-256 of the file contents.
    pub sha256: String,
}

/// Provenance record written next to the outputs of every run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub toolkit: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    /// The configuration after overrides and energy defaults.
    pub config: RunConfig,
    pub duration_seconds: f64,
    pub outputs: Vec<OutputRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    pub fn new(command: &str, config: &RunConfig, duration_seconds: f64, files: &[OutputFile]) -> Self {
        Self {
            toolkit: TOOLKIT.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed: config.seed,
            config: config.clone(),
            duration_seconds,
            outputs: files
                .iter()
                .map(|f| OutputRecord {
                    file: f.name.clone(),
                    bytes: f.bytes.len() as u64,
                    sha256: sha256_hex(&f.bytes),
                })
                .collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Recomputes the checksums of the listed files in `dir`; returns the
    /// names that are missing or differ.
    pub fn verify(&self, dir: &Path) -> Vec<String> {
        self.outputs
            .iter()
            .filter(|r| match std::fs::read(dir.join(&r.file)) {
                Ok(bytes) => bytes.len() as u64 != r.bytes || sha256_hex(&bytes) != r.sha256,
                Err(_) => true,
            })
            .map(|r| r.file.clone())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
