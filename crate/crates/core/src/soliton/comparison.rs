use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{GcsfError, Result};
use crate::ode::{dopri5, AcceptedStep, Tolerance};
use crate::quad;
use crate::table::write_columns;

/// Solution of ρ'' = 10 t^{1/α} ρ' + 10δ, ρ(0) = −δ, ρ'(0) = 0.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub alpha: f64,
    pub delta: f64,
    pub t: Vec<f64>,
    pub rho: Vec<f64>,
    pub drho: Vec<f64>,
    /// First t with ρ'(t) = 1, if reached before t_max.
    pub a_cross: Option<f64>,
    steps: Vec<AcceptedStep<2>>,
}

impl OdeSolution {
    /// (ρ, ρ') at `t` from the continuous extension of the accepted steps.
    pub fn eval(&self, t: f64) -> Option<[f64; 2]> {
        if t == 0.0 {
            return Some([-self.delta, 0.0]);
        }
        let i = self.steps.partition_point(|s| s.t1 < t);
        self.steps.get(i).filter(|s| s.t0 <= t).map(|s| s.eval(t))
    }

    pub fn to_csv(&self) -> String {
        write_columns(&["t", "rho", "drho"], &[&self.t, &self.rho, &self.drho])
    }
}

/// Scalar summary of a comparison-ODE run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSummary {
    pub alpha: f64,
    pub delta: f64,
    pub a_cross: Option<f64>,
    /// a_cross / (−ln δ)^{α/(α+1)}.
    pub scaled_a_cross: Option<f64>,
    pub closed_form_defect: f64,
}

fn check(alpha: f64, delta: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(GcsfError::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(GcsfError::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    Ok(())
}

/// Integrates until ρ' reaches 1 (plus nothing further) or t_max.
pub fn comparison_ode(alpha: f64, delta: f64, t_max: f64, tol: f64) -> Result<OdeSolution> {
    check(alpha, delta)?;
    if !(t_max > 0.0) || !(tol > 0.0) {
        return Err(GcsfError::InvalidParameter("t_max and tol must be positive".into()));
    }
    let inv = 1.0 / alpha;
    let rhs = move |t: f64, y: &[f64; 2]| [y[1], 10.0 * t.powf(inv) * y[1] + 10.0 * delta];
    let tolerance = Tolerance { rtol: tol, atol: tol * 1e-4 * delta };
    let mut sol =
        OdeSolution { alpha, delta, t: vec![0.0], rho: vec![-delta], drho: vec![0.0], a_cross: None, steps: Vec::new() };
    dopri5(rhs, 0.0, [-delta, 0.0], t_max, tolerance, Some(t_max * 1e-6), |st| {
        sol.t.push(st.t1);
        sol.rho.push(st.y1[0]);
        sol.drho.push(st.y1[1]);
        sol.steps.push(st.clone());
        if st.y1[1] >= 1.0 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    if let Some(last) = sol.steps.last().filter(|s| s.y1[1] >= 1.0) {
        let (mut lo, mut hi) = (last.t0, last.t1);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if last.eval(mid)[1] >= 1.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        sol.a_cross = Some(0.5 * (lo + hi));
    }
    Ok(sol)
}

/// ρ'(t) = 10δ ∫₀^t exp(K(t^q − s^q)) ds with K = 10α/(α+1), q = (α+1)/α.
pub fn comparison_closed_form(alpha: f64, delta: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let q = (alpha + 1.0) / alpha;
    let k = 10.0 * alpha / (alpha + 1.0);
    let tq = t.powf(q);
    let integral = quad::integrate(|s| (k * (tq - s.powf(q))).exp(), 0.0, t, 1e-14 * t);
    10.0 * delta * integral
}

/// Largest relative deviation of the integrated ρ' from the closed form over
/// the recorded nodes in (0, a_cross] (or all nodes if 1 was not reached).
pub fn closed_form_defect(sol: &OdeSolution) -> f64 {
    nodal_defect(sol.alpha, sol.delta, &sol.t, &sol.drho, sol.a_cross)
}

/// [`closed_form_defect`] on bare node arrays, e.g. read back from a CSV.
pub fn nodal_defect(alpha: f64, delta: f64, t: &[f64], drho: &[f64], a_cross: Option<f64>) -> f64 {
    let end = a_cross.unwrap_or(f64::INFINITY);
    t.iter()
        .zip(drho)
        .filter(|(t, _)| **t > 0.0 && **t <= end)
        .map(|(t, d)| {
            let exact = comparison_closed_form(alpha, delta, *t);
            ((d - exact) / exact).abs()
        })
        .fold(0.0, f64::max)
}

pub fn summarize(sol: &OdeSolution) -> ComparisonSummary {
    let scale = (-sol.delta.ln()).powf(sol.alpha / (sol.alpha + 1.0));
    ComparisonSummary {
        alpha: sol.alpha,
        delta: sol.delta,
        a_cross: sol.a_cross,
        scaled_a_cross: sol.a_cross.map(|a| a / scale),
        closed_form_defect: closed_form_defect(sol),
    }
}
