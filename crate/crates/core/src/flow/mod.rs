//! Evolution of convex curves with inward normal speed κ^α, in support-function
//! form ds/dt = −(s'' + s)^{−α}, and its self-similar normalization.

mod engine;
mod identities;
mod rate;
mod trace;

pub use engine::{
    linearized_mode_rate, max_stable_dt, rhs_normalized, rhs_unnormalized, run_normalized, run_to_extinction, step,
    NormalizedRun, Rhs,
};
pub use identities::{area_rate_check, area_rate_defect, curvature_power_integrals, jensen_bound_check};
pub use rate::{fit_decay_rate, linear_fit, LinearFit, RateFit};
pub use trace::{estimate_extinction_time, normalize_trace, FlowTrace, NormalizedState, StopReason};

use serde::{Deserialize, Serialize};

use crate::error::{GcsfError, Result};
use crate::geometry::{check_grid, DEFAULT_GRID};

/// Parameters shared by every solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowParams {
    /// Power of the curvature in the normal speed.
    pub alpha: f64,
    /// Operator parameter of L_σ; the curve flow itself always runs at σ = 0.
    pub sigma: f64,
    /// Fraction of the explicit parabolic stability limit used per step.
    pub cfl: f64,
    /// A run is declared extinct once the inradius drops below this.
    pub stop_inradius: f64,
    /// Angular grid size.
    pub m: usize,
    /// Keep every `record_stride`-th accepted step in the trace.
    pub record_stride: usize,
}

impl Default for FlowParams {
    fn default() -> Self {
        FlowParams { alpha: 1.0, sigma: 0.0, cfl: 0.2, stop_inradius: 1e-3, m: DEFAULT_GRID, record_stride: 50 }
    }
}

impl FlowParams {
    pub fn with_alpha(alpha: f64) -> Self {
        FlowParams { alpha, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(GcsfError::InvalidParameter(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.sigma) {
            return Err(GcsfError::InvalidParameter(format!("sigma must lie in [0, 1], got {}", self.sigma)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(GcsfError::InvalidParameter(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.stop_inradius > 0.0) {
            return Err(GcsfError::InvalidParameter(format!(
                "stop_inradius must be positive, got {}",
                self.stop_inradius
            )));
        }
        if self.record_stride == 0 {
            return Err(GcsfError::InvalidParameter("record_stride must be at least 1".into()));
        }
        check_grid(self.m)
    }
}
