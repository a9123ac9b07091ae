use super::trace::{estimate_extinction_time, FlowTrace, StopReason};
use super::FlowParams;
use crate::error::{GcsfError, Result};
use crate::geometry::{check_convex, SupportFunction};
use crate::spectral;

/// Which right-hand side a step advances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rhs {
    /// ds/dt = −(s'' + s)^{−α}
    Unnormalized,
    /// ds/dτ = −(s'' + s)^{−α} + s
    Normalized,
}

fn eval_rhs(samples: &[f64], alpha: f64, rhs: Rhs) -> Result<Vec<f64>> {
    let r = spectral::radius_of_curvature(samples);
    check_convex(&r)?;
    Ok(match rhs {
        Rhs::Unnormalized => r.iter().map(|ri| -ri.powf(-alpha)).collect(),
        Rhs::Normalized => r.iter().zip(samples).map(|(ri, s)| s - ri.powf(-alpha)).collect(),
    })
}

/// Inward motion with normal speed κ^α.
pub fn rhs_unnormalized(s: &SupportFunction, p: &FlowParams) -> Result<Vec<f64>> {
    eval_rhs(s.samples(), p.alpha, Rhs::Unnormalized)
}

/// The flow after rescaling by the self-similar shrinking factor; the unit
/// circle is a stationary point.
pub fn rhs_normalized(s: &SupportFunction, p: &FlowParams) -> Result<Vec<f64>> {
    eval_rhs(s.samples(), p.alpha, Rhs::Normalized)
}

/// Largest step allowed by the explicit stability restriction
/// cfl·Δθ² / max_k α (s''+s)_k^{−(α+1)}.
pub fn max_stable_dt(s: &SupportFunction, p: &FlowParams) -> Result<f64> {
    let r = s.curvature_radius()?;
    Ok(stable_dt_from_radius(&r, s.dtheta(), p))
}

fn stable_dt_from_radius(r: &[f64], dtheta: f64, p: &FlowParams) -> f64 {
    let r_min = r.iter().copied().fold(f64::INFINITY, f64::min);
    let diffusivity = p.alpha * r_min.powf(-(p.alpha + 1.0));
    p.cfl * dtheta * dtheta / diffusivity
}

/// One classical RK4 step of size `dt`.
///
/// Steps larger than the stability bound, and steps whose stages or result
/// lose convexity, are refused with [`GcsfError::StepRejected`].
pub fn step(s: &SupportFunction, p: &FlowParams, dt: f64, rhs: Rhs) -> Result<SupportFunction> {
    if !(dt >= 0.0 && dt.is_finite()) {
        return Err(GcsfError::InvalidParameter(format!("dt must be finite and nonnegative, got {dt}")));
    }
    if dt == 0.0 {
        return Ok(s.clone());
    }
    let limit = max_stable_dt(s, p)?;
    if dt > limit * (1.0 + 1e-12) {
        return Err(GcsfError::StepRejected(format!("dt = {dt:e} exceeds stability bound {limit:e}")));
    }
    rk4_stages(s.samples(), p.alpha, dt, rhs).map(SupportFunction::from_trusted)
}

fn rk4_stages(y: &[f64], alpha: f64, dt: f64, rhs: Rhs) -> Result<Vec<f64>> {
    let reject = |e: GcsfError| match e {
        GcsfError::ConvexityLost(msg) => GcsfError::StepRejected(format!("stage lost convexity: {msg}")),
        other => other,
    };
    let axpy = |a: f64, k: &[f64]| -> Vec<f64> { y.iter().zip(k).map(|(yi, ki)| yi + a * ki).collect() };
    let k1 = eval_rhs(y, alpha, rhs)?;
    let k2 = eval_rhs(&axpy(0.5 * dt, &k1), alpha, rhs).map_err(reject)?;
    let k3 = eval_rhs(&axpy(0.5 * dt, &k2), alpha, rhs).map_err(reject)?;
    let k4 = eval_rhs(&axpy(dt, &k3), alpha, rhs).map_err(reject)?;
    let out: Vec<f64> = (0..y.len())
        .map(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    let r = spectral::radius_of_curvature(&out);
    check_convex(&r).map_err(reject)?;
    if out.iter().any(|v| !v.is_finite()) {
        return Err(GcsfError::StepRejected("non-finite state".into()));
    }
    Ok(out)
}

/// Smallest step the adaptive loop will try before giving up on convexity.
const DT_FLOOR_FACTOR: f64 = 1e-8;

/// Integrates the unnormalized flow with the largest stable step until the
/// inradius falls below `p.stop_inradius` or `t_max` is reached.
pub fn run_to_extinction(s0: &SupportFunction, p: &FlowParams, t_max: f64) -> Result<FlowTrace> {
    p.validate()?;
    if s0.m() != p.m {
        return Err(GcsfError::InvalidParameter(format!(
            "initial body has {} nodes but params.m = {}",
            s0.m(),
            p.m
        )));
    }
    if !(t_max > 0.0) {
        return Err(GcsfError::InvalidParameter(format!("t_max must be positive, got {t_max}")));
    }
    s0.curvature_radius()?;

    let mut trace = FlowTrace::new(*p);
    let mut t = 0.0;
    let mut s = s0.clone();
    let mut steps = 0usize;
    trace.push(0, t, &s);

    let reason = loop {
        if s.inradius() < p.stop_inradius {
            break StopReason::Extinct;
        }
        if t >= t_max {
            break StopReason::TimeLimit;
        }
        let r = s.curvature_radius()?;
        let bound = stable_dt_from_radius(&r, s.dtheta(), p);
        let mut dt = bound.min(t_max - t);
        let floor = bound * DT_FLOOR_FACTOR;
        let next = loop {
            match rk4_stages(s.samples(), p.alpha, dt, Rhs::Unnormalized) {
                Ok(v) => break Some(v),
                Err(GcsfError::StepRejected(_)) if dt > floor => dt *= 0.5,
                Err(GcsfError::StepRejected(_)) | Err(GcsfError::ConvexityLost(_)) => break None,
                Err(e) => return Err(e),
            }
        };
        let Some(next) = next else {
            break StopReason::ConvexityLost;
        };
        s = SupportFunction::from_trusted(next);
        t += dt;
        steps += 1;
        if steps.is_multiple_of(p.record_stride) {
            trace.push(steps, t, &s);
        }
    };
    if trace.step_indices.last() != Some(&steps) {
        trace.push(steps, t, &s);
    }
    trace.stop_reason = reason;
    trace.steps = steps;
    if reason == StopReason::Extinct {
        trace.extinction_time = estimate_extinction_time(&trace.times, &trace.inradii, p.alpha);
    }
    Ok(trace)
}

/// States of a directly integrated normalized flow.
#[derive(Debug, Clone)]
pub struct NormalizedRun {
    pub taus: Vec<f64>,
    pub states: Vec<SupportFunction>,
}

/// Integrates ds/dτ = −(s''+s)^{−α} + s up to `tau_max`.
///
/// The scaling mode is unstable here (eigenvalue 1+α), so this is only
/// meaningful over moderate τ for data close to the unit circle; the
/// rescaled extinction run of [`super::normalize_trace`] factors that mode out
/// exactly.
pub fn run_normalized(s0: &SupportFunction, p: &FlowParams, tau_max: f64) -> Result<NormalizedRun> {
    p.validate()?;
    if !(tau_max > 0.0) {
        return Err(GcsfError::InvalidParameter(format!("tau_max must be positive, got {tau_max}")));
    }
    let mut out = NormalizedRun { taus: vec![0.0], states: vec![s0.clone()] };
    let mut tau = 0.0;
    let mut s = s0.clone();
    let mut steps = 0usize;
    while tau < tau_max {
        let dt = max_stable_dt(&s, p)?.min(tau_max - tau);
        s = step(&s, p, dt, Rhs::Normalized)?;
        tau += dt;
        steps += 1;
        if steps.is_multiple_of(p.record_stride) || tau >= tau_max {
            out.taus.push(tau);
            out.states.push(s.clone());
        }
    }
    Ok(out)
}

/// Eigenvalue 1 + α(1 − n²) of the flow linearized about the unit circle on
/// the Fourier mode cos nθ.
pub fn linearized_mode_rate(alpha: f64, n: u32) -> f64 {
    let n = n as f64;
    1.0 + alpha * (1.0 - n * n)
}
