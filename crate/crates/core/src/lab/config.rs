use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::LabError;
use crate::flow::FlowParams;
use crate::geometry::{PlanePoint, SupportFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Flow,
    NormalizedRate,
    Translator1d,
    RadialTranslator,
    Blowdown,
    Legendre,
    #[serde(rename = "lemma1-ode")]
    ComparisonOde,
    LogConvexity,
    AreaIdentity,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Flow => "flow",
            Experiment::NormalizedRate => "normalized-rate",
            Experiment::Translator1d => "translator1d",
            Experiment::RadialTranslator => "radial-translator",
            Experiment::Blowdown => "blowdown",
            Experiment::Legendre => "legendre",
            Experiment::ComparisonOde => "lemma1-ode",
            Experiment::LogConvexity => "log-convexity",
            Experiment::AreaIdentity => "area-identity",
        }
    }

    fn needs_body(&self) -> bool {
        matches!(self, Experiment::Flow | Experiment::NormalizedRate | Experiment::AreaIdentity)
    }

    fn needs_sigma(&self) -> bool {
        matches!(self, Experiment::RadialTranslator | Experiment::Blowdown | Experiment::Legendre)
    }
}

/// Initial convex body of the curve-flow experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialBody {
    Circle {
        radius: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    /// s = mean + Σ a_n cos nθ + b_n sin nθ with modes given as [n, a_n, b_n].
    Fourier {
        #[serde(default = "unit")]
        mean: f64,
        modes: Vec<(usize, f64, f64)>,
    },
    /// Seeded draw with |a_n|, |b_n| ≤ c/n³ for 2 ≤ n ≤ terms.
    Random {
        terms: usize,
        c: f64,
    },
}

fn unit() -> f64 {
    1.0
}

/// Experiment-specific knobs; each experiment reads only its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    /// Time limit of curve-flow runs.
    pub t_max: f64,
    /// τ window of the decay-rate fit.
    pub tau_window: (f64, f64),
    /// Fourier mode whose amplitude is fitted.
    pub mode: u32,
    /// Range of the 1-D translator.
    pub x_max: f64,
    /// ODE tolerance of the soliton solvers; 1e-12 for the radial
    /// experiments and 1e-10 otherwise when absent.
    pub tol: Option<f64>,
    /// Radial extent; chosen from the other settings when absent.
    pub r_max: Option<f64>,
    pub h_values: Vec<f64>,
    pub deltas: Vec<f64>,
    /// Horizon of the comparison ODE.
    pub ode_t_max: f64,
    pub radii: Vec<f64>,
    pub p_window: (f64, f64),
    pub strides: Vec<usize>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            t_max: 10.0,
            tau_window: (1.0, 3.0),
            mode: 2,
            x_max: 20.0,
            tol: None,
            r_max: None,
            h_values: vec![1e1, 1e2, 1e3, 1e4],
            deltas: vec![1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8],
            ode_t_max: 20.0,
            radii: vec![0.5, 1.0, 2.0],
            p_window: (50.0, 100.0),
            strides: vec![40, 20, 10],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub params: FlowParams,
    #[serde(default)]
    pub initial_body: Option<InitialBody>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub settings: Settings,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("gcsf-out")
}

fn bad(field: &str, msg: impl std::fmt::Display) -> LabError {
    LabError::Config(format!("{field}: {msg}"))
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, LabError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            bad(if path == "." { "config" } else { &path }, e.inner())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Field-level checks; the error names the offending field.
    pub fn validate(&self) -> Result<(), LabError> {
        let p = &self.params;
        if !(p.alpha > 0.0 && p.alpha.is_finite()) {
            return Err(bad("params.alpha", format!("must be positive, got {}", p.alpha)));
        }
        if !(0.0..=1.0).contains(&p.sigma) {
            return Err(bad("params.sigma", format!("must lie in [0, 1], got {}", p.sigma)));
        }
        if self.experiment.needs_sigma() && p.sigma == 0.0 {
            return Err(bad("params.sigma", format!("{} needs sigma in (0, 1]", self.experiment.name())));
        }
        if !(p.cfl > 0.0 && p.cfl <= 1.0) {
            return Err(bad("params.cfl", format!("must lie in (0, 1], got {}", p.cfl)));
        }
        if !(p.stop_inradius > 0.0) {
            return Err(bad("params.stop_inradius", format!("must be positive, got {}", p.stop_inradius)));
        }
        if p.record_stride == 0 {
            return Err(bad("params.record_stride", "must be at least 1"));
        }
        if p.m < crate::geometry::MIN_GRID || !p.m.is_multiple_of(2) {
            return Err(bad("params.m", format!("must be even and at least {}, got {}", crate::geometry::MIN_GRID, p.m)));
        }
        if self.experiment.needs_body() && self.initial_body.is_none() {
            return Err(bad("initial_body", format!("required by {}", self.experiment.name())));
        }
        let s = &self.settings;
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(bad(&format!("settings.{name}"), format!("must be positive, got {v}")))
            }
        };
        positive("t_max", s.t_max)?;
        positive("x_max", s.x_max)?;
        if let Some(t) = s.tol {
            positive("tol", t)?;
        }
        positive("ode_t_max", s.ode_t_max)?;
        if let Some(r) = s.r_max {
            positive("r_max", r)?;
        }
        for (name, (lo, hi)) in [("tau_window", s.tau_window), ("p_window", s.p_window)] {
            if !(lo < hi) {
                return Err(bad(&format!("settings.{name}"), format!("needs lower < upper, got ({lo}, {hi})")));
            }
        }
        for (name, list) in [("h_values", &s.h_values), ("deltas", &s.deltas), ("radii", &s.radii)] {
            for v in list {
                positive(name, *v)?;
            }
        }
        if s.strides.contains(&0) {
            return Err(bad("settings.strides", "entries must be at least 1"));
        }
        Ok(())
    }

    /// Solver tolerance after applying the per-experiment default.
    pub fn tol(&self) -> f64 {
        self.settings.tol.unwrap_or(if self.experiment.needs_sigma() { 1e-12 } else { 1e-10 })
    }

    /// Builds the initial body on the configured grid.
    pub fn body(&self) -> crate::Result<SupportFunction> {
        let m = self.params.m;
        match self.initial_body.as_ref().expect("validated") {
            InitialBody::Circle { radius, center } => {
                SupportFunction::circle(*radius, PlanePoint::new(center[0], center[1])?, m)
            }
            InitialBody::Ellipse { a, b } => SupportFunction::ellipse(*a, *b, m),
            InitialBody::Fourier { mean, modes } => SupportFunction::fourier(*mean, modes, m),
            InitialBody::Random { terms, c } => {
                SupportFunction::random_convex(&mut ChaCha8Rng::seed_from_u64(self.seed), *terms, *c, m)
            }
        }
    }
}
