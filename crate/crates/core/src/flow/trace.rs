use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::rate::linear_fit;
use super::FlowParams;
use crate::error::{GcsfError, Result};
use crate::geometry::SupportFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Extinct,
    ConvexityLost,
    TimeLimit,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::Extinct => "extinct",
            StopReason::ConvexityLost => "convexity_lost",
            StopReason::TimeLimit => "time_limit",
        }
    }
}

/// Recorded states of one unnormalized run with per-state diagnostics.
#[derive(Debug, Clone)]
pub struct FlowTrace {
    pub params: FlowParams,
    pub times: Vec<f64>,
    pub step_indices: Vec<usize>,
    pub states: Vec<SupportFunction>,
    pub areas: Vec<f64>,
    pub lengths: Vec<f64>,
    pub inradii: Vec<f64>,
    pub circumradii: Vec<f64>,
    pub extinction_time: Option<f64>,
    pub stop_reason: StopReason,
    /// Total accepted steps.
    pub steps: usize,
}

/// Manifest written next to an exported trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceManifest {
    pub alpha: f64,
    pub sigma: f64,
    pub m: usize,
    pub cfl: f64,
    pub stop_inradius: f64,
    pub extinction_time: Option<f64>,
    pub stop_reason: StopReason,
}

impl FlowTrace {
    pub(crate) fn new(params: FlowParams) -> Self {
        FlowTrace {
            params,
            times: Vec::new(),
            step_indices: Vec::new(),
            states: Vec::new(),
            areas: Vec::new(),
            lengths: Vec::new(),
            inradii: Vec::new(),
            circumradii: Vec::new(),
            extinction_time: None,
            stop_reason: StopReason::TimeLimit,
            steps: 0,
        }
    }

    pub(crate) fn push(&mut self, step: usize, t: f64, s: &SupportFunction) {
        self.times.push(t);
        self.step_indices.push(step);
        self.areas.push(s.area());
        self.lengths.push(s.length());
        self.inradii.push(s.inradius());
        self.circumradii.push(s.circumradius());
        self.states.push(s.clone());
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Distance of a state from the circle of its own mean radius about its
    /// Steiner point.
    pub fn delta_to_circle(&self, i: usize) -> f64 {
        let s = &self.states[i];
        s.hausdorff_to_circle(s.steiner_point(), s.mean_radius()).unwrap_or(f64::NAN)
    }

    /// CSV with columns t, area, length, inradius, circumradius, delta_to_circle.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,area,length,inradius,circumradius,delta_to_circle\n");
        for i in 0..self.len() {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                self.times[i],
                self.areas[i],
                self.lengths[i],
                self.inradii[i],
                self.circumradii[i],
                self.delta_to_circle(i)
            )
            .unwrap();
        }
        out
    }

    pub fn manifest(&self) -> TraceManifest {
        TraceManifest {
            alpha: self.params.alpha,
            sigma: self.params.sigma,
            m: self.params.m,
            cfl: self.params.cfl,
            stop_inradius: self.params.stop_inradius,
            extinction_time: self.extinction_time,
            stop_reason: self.stop_reason,
        }
    }

    /// Writes one `<step>.json` per recorded state, zero-padded to 8 digits.
    pub fn write_snapshots(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (step, s) in self.step_indices.iter().zip(&self.states) {
            std::fs::write(dir.join(format!("{step:08}.json")), s.to_json())?;
        }
        Ok(())
    }
}

/// Extrapolates R^{1+α} linearly in t over the final decade of inradius to
/// the time where it vanishes. Exact for shrinking circles.
pub fn estimate_extinction_time(times: &[f64], inradii: &[f64], alpha: f64) -> Option<f64> {
    let n = times.len().min(inradii.len());
    if n < 2 {
        return None;
    }
    let r_final = inradii[n - 1];
    let mut idx: Vec<usize> = (0..n).filter(|&i| inradii[i] <= 10.0 * r_final).collect();
    if idx.len() < 3 {
        idx = (n.saturating_sub(3)..n).collect();
    }
    let ts: Vec<f64> = idx.iter().map(|&i| times[i]).collect();
    let ys: Vec<f64> = idx.iter().map(|&i| inradii[i].powf(1.0 + alpha)).collect();
    let fit = linear_fit(&ts, &ys).ok()?;
    if !(fit.slope < 0.0) {
        return None;
    }
    let t_ext = -fit.intercept / fit.slope;
    t_ext.is_finite().then_some(t_ext)
}

/// A state of the rescaled flow.
#[derive(Debug, Clone)]
pub struct NormalizedState {
    pub tau: f64,
    pub t: f64,
    pub state: SupportFunction,
}

/// Rescales each recorded state t < T by ((1+α)(T−t))^{−1/(1+α)} after moving
/// its Steiner point to the origin, with τ = −ln((1+α)(T−t))/(1+α). When
/// T = 1/(1+α) this is the normalization (1 − (1+α)t)^{−1/(1+α)} C_t and τ = 0
/// at t = 0.
pub fn normalize_trace(trace: &FlowTrace, p: &FlowParams) -> Result<Vec<NormalizedState>> {
    let t_ext = trace
        .extinction_time
        .ok_or_else(|| GcsfError::InvalidInput("trace has no extinction time".into()))?;
    let a1 = 1.0 + p.alpha;
    let mut out = Vec::new();
    for (t, s) in trace.times.iter().zip(&trace.states) {
        let remaining = a1 * (t_ext - t);
        if !(remaining > 0.0) {
            continue;
        }
        let factor = remaining.powf(-1.0 / a1);
        out.push(NormalizedState { tau: -remaining.ln() / a1, t: *t, state: s.recenter().scale(factor)? });
    }
    Ok(out)
}
