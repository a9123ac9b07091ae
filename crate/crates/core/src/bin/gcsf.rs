//! Command-line front end: `gcsf run`, `gcsf sweep` and `gcsf verify`.
//!
//! Exit status: 0 when every check passes, 2 when a check fails or a solver
//! gives up, 1 for usage, configuration and I/O errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use gcsf::lab::{self, apply_overrides, ExperimentConfig, LabError, RunManifest};

#[derive(Parser)]
#[command(name = "gcsf", version, about = "Curvature-flow and translating-soliton experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a JSON config.
    Run {
        config: PathBuf,
        /// Overrides such as `--alpha=1.5`, `h=1000` or `settings.tol=1e-8`.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        overrides: Vec<String>,
    },
    /// Run one experiment per value of a parameter.
    Sweep {
        config: PathBuf,
        /// Override key to vary.
        #[arg(long)]
        param: String,
        /// Comma-separated values; an empty string gives an empty sweep.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        overrides: Vec<String>,
    },
    /// Re-derive the checks of a finished run from its data files.
    Verify { dir: PathBuf },
}

fn load(path: &Path, overrides: &[String]) -> Result<ExperimentConfig, LabError> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
    apply_overrides(&ExperimentConfig::from_json(&text)?, overrides)
}

fn report(m: &RunManifest) {
    for c in &m.checks {
        println!("{}", c.describe());
    }
    if let Some(e) = &m.error {
        println!("ERROR {}: {}", e.tag, e.message);
    }
}

fn execute(command: Command) -> Result<bool, LabError> {
    match command {
        Command::Run { config, overrides } => {
            let cfg = load(&config, &overrides)?;
            let m = lab::run(&cfg)?;
            report(&m);
            println!("{} {} -> {}", if m.pass { "PASS" } else { "FAIL" }, cfg.experiment.name(), cfg.output_dir.display());
            Ok(m.pass)
        }
        Command::Sweep { config, param, values, overrides } => {
            let cfg = load(&config, &overrides)?;
            let values: Vec<String> =
                values.split(',').map(str::trim).filter(|v| !v.is_empty()).map(str::to_string).collect();
            let summary = lab::sweep(&cfg, &param, &values, &cfg.output_dir)?;
            for row in &summary.rows {
                let status = match (&row.manifest.error, row.manifest.pass) {
                    (Some(e), _) => format!("ERROR {}", e.tag),
                    (None, true) => "PASS".into(),
                    (None, false) => "FAIL".into(),
                };
                println!("{status} {param}={} -> {}", row.value, row.dir.display());
            }
            println!("summary -> {}", cfg.output_dir.join("summary.csv").display());
            Ok(summary.all_pass())
        }
        Command::Verify { dir } => {
            let v = lab::verify(&dir)?;
            for c in &v.checks {
                println!("{}", c.describe());
            }
            for m in &v.mismatches {
                println!("MISMATCH {m}");
            }
            let pass = v.ok() && v.checks.iter().all(|c| c.pass);
            println!("{} verify {}", if v.ok() { "CONSISTENT" } else { "INCONSISTENT" }, dir.display());
            Ok(pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("gcsf: {e}");
            ExitCode::from(1)
        }
    }
}
