//! Configured experiments: a run writes its data files, derives headline
//! scalars and tolerance checks from them, and records everything in
//! `manifest.json` and `checks.csv` inside the output directory.

mod check;
mod config;
mod experiments;
mod overrides;
mod sweep;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use check::{checks_from_csv, checks_to_csv, Check, CheckMode};
pub use config::{Experiment, ExperimentConfig, InitialBody, Settings};
pub use overrides::apply_overrides;
pub use sweep::{sweep, SweepRow, SweepSummary};

use crate::GcsfError;

#[derive(Debug, Error)]
pub enum LabError {
    /// Malformed or out-of-range configuration; the message names the field.
    #[error("config error: {0}")]
    Config(String),
    /// A data file is missing or unreadable.
    #[error("data error: {0}")]
    Data(String),
    #[error("io error: {0}")]
    Io(String),
    #[error(transparent)]
    Solver(#[from] GcsfError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunError {
    pub tag: String,
    pub message: String,
}

/// Everything needed to reproduce and audit one run. Headline scalars that
/// are not finite are left out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub version: String,
    pub wall_time_s: f64,
    pub headline: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub error: Option<RunError>,
    pub outputs: Vec<String>,
}

pub const MANIFEST_FILE: &str = "manifest.json";
pub const CHECKS_FILE: &str = "checks.csv";

fn io_err(path: &Path, e: impl std::fmt::Display) -> LabError {
    LabError::Io(format!("{}: {e}", path.display()))
}

/// Runs one experiment into `cfg.output_dir`. Solver failures are recorded
/// in the manifest with `pass = false`; configuration and I/O problems are
/// returned as errors.
pub fn run(cfg: &ExperimentConfig) -> Result<RunManifest, LabError> {
    cfg.validate()?;
    let dir = &cfg.output_dir;
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let start = Instant::now();
    let result = experiments::produce(cfg, dir).and_then(|outputs| Ok((outputs, experiments::derive(cfg, dir)?)));
    let mut manifest = RunManifest {
        config: cfg.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_s: 0.0,
        headline: BTreeMap::new(),
        checks: Vec::new(),
        pass: false,
        error: None,
        outputs: Vec::new(),
    };
    match result {
        Ok((outputs, outcome)) => {
            manifest.pass = outcome.checks.iter().all(|c| c.pass);
            manifest.outputs = outputs;
            manifest.headline = outcome.headline.into_iter().filter(|(_, v)| v.is_finite()).collect();
            manifest.checks = outcome.checks;
        }
        Err(LabError::Solver(e)) => manifest.error = Some(RunError { tag: e.tag().into(), message: e.to_string() }),
        Err(e) => return Err(e),
    }
    manifest.wall_time_s = start.elapsed().as_secs_f64();
    let checks_path = dir.join(CHECKS_FILE);
    fs::write(&checks_path, checks_to_csv(&manifest.checks)).map_err(|e| io_err(&checks_path, e))?;
    let manifest_path = dir.join(MANIFEST_FILE);
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&manifest_path, text).map_err(|e| io_err(&manifest_path, e))?;
    Ok(manifest)
}

/// Result of re-deriving a stored run.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    /// Human-readable disagreements with the stored `checks.csv`.
    pub mismatches: Vec<String>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Re-derives every check of the run in `dir` from its data files and
/// compares with `checks.csv` to within 1e-6·max(1, |stored|).
pub fn verify(dir: &Path) -> Result<VerifyReport, LabError> {
    let read = |name: &str| fs::read_to_string(dir.join(name)).map_err(|e| LabError::Data(format!("{name}: {e}")));
    let manifest: RunManifest =
        serde_json::from_str(&read(MANIFEST_FILE)?).map_err(|e| LabError::Data(format!("{MANIFEST_FILE}: {e}")))?;
    let stored = checks_from_csv(&read(CHECKS_FILE)?)?;
    let derived = if manifest.error.is_some() {
        Vec::new()
    } else {
        experiments::derive(&manifest.config, dir)?.checks
    };
    let mut mismatches = Vec::new();
    if stored.len() != derived.len() {
        mismatches.push(format!("{} stored checks, {} re-derived", stored.len(), derived.len()));
    }
    for (s, d) in stored.iter().zip(&derived) {
        let same_value = (s.value.is_nan() && d.value.is_nan()) || (s.value - d.value).abs() <= 1e-6 * s.value.abs().max(1.0);
        if s.name != d.name || !same_value || s.pass != d.pass {
            mismatches.push(format!("{}: stored {} ({}), re-derived {} {} ({})", s.name, s.value, s.pass, d.name, d.value, d.pass));
        }
    }
    Ok(VerifyReport { checks: derived, mismatches })
}
