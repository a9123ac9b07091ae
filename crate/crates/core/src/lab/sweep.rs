use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::{apply_overrides, run, ExperimentConfig, LabError, RunManifest};

/// Environment variable capping the sweep's worker threads.
pub const THREADS_ENV: &str = "GCSF_THREADS";

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub value: String,
    pub dir: PathBuf,
    pub manifest: RunManifest,
}

#[derive(Debug, Clone)]
pub struct SweepSummary {
    pub rows: Vec<SweepRow>,
}

impl SweepSummary {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.manifest.pass)
    }

    /// One line per value: value, pass, error tag, then the union of
    /// headline keys in sorted order (blank where a run lacks one).
    pub fn to_csv(&self) -> String {
        let keys: BTreeSet<&String> = self.rows.iter().flat_map(|r| r.manifest.headline.keys()).collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        let header: Vec<&str> = ["value", "pass", "error"].into_iter().chain(keys.iter().map(|k| k.as_str())).collect();
        w.write_record(&header).expect("in-memory write");
        for r in &self.rows {
            let mut rec = vec![
                r.value.clone(),
                r.manifest.pass.to_string(),
                r.manifest.error.as_ref().map(|e| e.tag.clone()).unwrap_or_default(),
            ];
            rec.extend(keys.iter().map(|k| r.manifest.headline.get(*k).map(|v| v.to_string()).unwrap_or_default()));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

fn threads() -> usize {
    std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()).filter(|n| *n > 0).unwrap_or_else(|| {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    })
}

/// Runs `cfg` once per value of `param`, each into `base/param=value`, and
/// writes `base/summary.csv`. Rows keep the order of `values`.
pub fn sweep(cfg: &ExperimentConfig, param: &str, values: &[String], base: &Path) -> Result<SweepSummary, LabError> {
    fs::create_dir_all(base).map_err(|e| LabError::Io(format!("{}: {e}", base.display())))?;
    let configs = values
        .iter()
        .map(|v| {
            let dir = base.join(format!("{param}={}", v.replace(['/', '\\'], "_")));
            let mut c = apply_overrides(cfg, &[format!("{param}={v}")])?;
            c.output_dir = dir.clone();
            Ok((v.clone(), dir, c))
        })
        .collect::<Result<Vec<_>, LabError>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads())
        .build()
        .map_err(|e| LabError::Io(format!("thread pool: {e}")))?;
    let rows = pool.install(|| {
        configs
            .into_par_iter()
            .map(|(value, dir, c)| run(&c).map(|manifest| SweepRow { value, dir, manifest }))
            .collect::<Result<Vec<_>, LabError>>()
    })?;
    let summary = SweepSummary { rows };
    let path = base.join("summary.csv");
    fs::write(&path, summary.to_csv()).map_err(|e| LabError::Io(format!("{}: {e}", path.display())))?;
    Ok(summary)
}
