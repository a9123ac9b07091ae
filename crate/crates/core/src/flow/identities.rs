use std::f64::consts::TAU;

use super::trace::FlowTrace;
use super::FlowParams;
use crate::error::{GcsfError, Result};
use crate::geometry::SupportFunction;
use crate::spectral;

/// ∮κ^α dξ evaluated two ways: with arclength dξ = (s''+s)dθ and as
/// ∮(s''+s)^{1−α}dθ.
pub fn curvature_power_integrals(s: &SupportFunction, alpha: f64) -> Result<(f64, f64)> {
    let r = s.curvature_radius()?;
    let dth = s.dtheta();
    let by_arclength = dth * r.iter().map(|ri| ri.powf(-alpha) * ri).sum::<f64>();
    let by_angle = dth * r.iter().map(|ri| ri.powf(1.0 - alpha)).sum::<f64>();
    Ok((by_arclength, by_angle))
}

fn turning_integral(s: &SupportFunction, alpha: f64) -> f64 {
    let r = spectral::radius_of_curvature(s.samples());
    s.dtheta() * r.iter().map(|ri| ri.powf(1.0 - alpha)).sum::<f64>()
}

/// Largest |dA/dt + ∮κ^{α−1}dθ| over interior trace samples, with dA/dt from
/// the three-point (second-order on nonuniform spacing) difference of the
/// recorded areas.
pub fn area_rate_check(trace: &FlowTrace, p: &FlowParams) -> f64 {
    let turning: Vec<f64> = trace.states.iter().map(|s| turning_integral(s, p.alpha)).collect();
    area_rate_defect(&trace.times, &trace.areas, &turning)
}

/// The defect of [`area_rate_check`] from sampled times, areas and
/// ∮(s''+s)^{1−α}dθ values.
pub fn area_rate_defect(t: &[f64], a: &[f64], turning: &[f64]) -> f64 {
    let n = t.len().min(a.len()).min(turning.len());
    let mut worst: f64 = 0.0;
    for i in 1..n.saturating_sub(1) {
        let h1 = t[i] - t[i - 1];
        let h2 = t[i + 1] - t[i];
        if !(h1 > 0.0 && h2 > 0.0) {
            continue;
        }
        let rate = -h2 / (h1 * (h1 + h2)) * a[i - 1] + (h2 - h1) / (h1 * h2) * a[i] + h1 / (h2 * (h1 + h2)) * a[i + 1];
        worst = worst.max((rate + turning[i]).abs());
    }
    worst
}

/// (∮κ^α dξ, L^{1−α}(2π)^α), the two sides of Jensen's inequality for α ≥ 1.
pub fn jensen_bound_check(s: &SupportFunction, p: &FlowParams) -> Result<(f64, f64)> {
    if !(p.alpha >= 1.0) {
        return Err(GcsfError::InvalidParameter(format!(
            "Jensen bound needs alpha >= 1, got {}",
            p.alpha
        )));
    }
    let (lhs, _) = curvature_power_integrals(s, p.alpha)?;
    let rhs = s.length().powf(1.0 - p.alpha) * TAU.powf(p.alpha);
    Ok((lhs, rhs))
}
