#![allow(dead_code)]

use std::path::{Path, PathBuf};

use jsonschema::{Retrieve, Uri, Validator};
use microcanon_cli::{execute, Command, Overrides, RunConfig, RunReport};
use serde_json::Value;

pub fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Serves sibling schema files from `docs/` by file name.
struct DocsRetriever;

impl Retrieve for DocsRetriever {
    fn retrieve(&self, uri: &Uri<String>) -> Result<Value, Box<dyn std::error::Error + Send + Sync>> {
        let name = uri.path().as_str().rsplit('/').next().unwrap_or_default().to_string();
        let path = repo_root().join("docs").join(&name);
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

pub fn schema(name: &str) -> Validator {
    let schema = read_json(&repo_root().join("docs").join(name));
    jsonschema::options()
        .with_retriever(DocsRetriever)
        .build(&schema)
        .unwrap()
}

pub fn assert_valid(validator: &Validator, instance: &Value) {
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:#?}\n{instance:#}");
}

pub fn config(text: &str, dir: &Path) -> RunConfig {
    let mut cfg = RunConfig::from_json(text).unwrap();
    cfg.output.dir = dir.to_path_buf();
    cfg
}

pub fn run(command: Command, cfg: &RunConfig) -> RunReport {
    execute(command, cfg.clone(), &Overrides::default()).unwrap()
}

pub fn read(dir: &Path, file: &str) -> String {
    std::fs::read_to_string(dir.join(file)).unwrap()
}

/// Rows of a CSV file without its header.
pub fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

pub fn column(text: &str, name: &str) -> Vec<f64> {
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let k = header
        .iter()
        .position(|h| *h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows(text).iter().map(|r| r[k].parse().unwrap()).collect()
}

/// `quantity,value` table as a lookup.
pub fn quantity(text: &str, name: &str) -> String {
    rows(text)
        .into_iter()
        .find(|r| r[0] == name)
        .unwrap_or_else(|| panic!("no row {name}"))[1]
        .clone()
}

pub fn degenerate(n_g: usize, n_c: usize, extra: &str) -> String {
    format!(
        r#"{{"seed": 31, "system": {{"gas": [{{"degeneracy": {n_g}, "weight": 1.0}}], "container": [{{"degeneracy": {n_c}, "weight": 1.0}}]}}{extra}}}"#
    )
}
