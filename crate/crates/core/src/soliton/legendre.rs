use serde::{Deserialize, Serialize};

use super::radial::{hermite, RadialProfile};
use crate::error::{GcsfError, Result};
use crate::flow::linear_fit;

/// u*(p) = max_r (p r − u(r)) on a uniform p grid over [0, du(r_max)]. A scan
/// over the source nodes finds the maximizing node; the vertex is then placed
/// where the linearly interpolated slope equals p, and valued with the cubic
/// Hermite interpolant of u. The dual's derivative is the maximizer r*(p) and
/// its second derivative 1/u_rr(r*).
pub fn legendre(profile: &RadialProfile) -> Result<RadialProfile> {
    if let Some(i) = profile.du.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(GcsfError::InvalidInput(format!(
            "Legendre transform needs a strictly convex profile; du does not increase at r = {}",
            profile.r[i + 1]
        )));
    }
    let n = profile.len();
    let (r, u, du) = (&profile.r, &profile.u, &profile.du);
    let p_max = du[n - 1];
    let mut ps = Vec::with_capacity(n);
    let mut us = Vec::with_capacity(n);
    let mut dus = Vec::with_capacity(n);
    let mut d2us = Vec::with_capacity(n);
    let mut best = 0usize;
    for k in 0..n {
        let p = if k + 1 == n { p_max } else { p_max * k as f64 / (n - 1) as f64 };
        let g = |i: usize| p * r[i] - u[i];
        while best + 1 < n && g(best + 1) >= g(best) {
            best += 1;
        }
        let i = if du[best] > p { best.saturating_sub(1) } else { best.min(n - 2) };
        let s = ((p - du[i]) / (du[i + 1] - du[i])).clamp(0.0, 1.0);
        let arg = r[i] + s * (r[i + 1] - r[i]);
        let val = p * arg - hermite(r[i], r[i + 1], u[i], u[i + 1], du[i], du[i + 1], arg);
        ps.push(p);
        us.push(val.max(g(best)));
        dus.push(arg);
        d2us.push(1.0 / interp(r, &profile.d2u, arg));
    }
    RadialProfile::new(profile.alpha, profile.sigma, profile.tol, ps, us, dus, d2us)
}

fn interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let i = xs.partition_point(|v| *v <= x).clamp(1, xs.len() - 1) - 1;
    let s = ((x - xs[i]) / (xs[i + 1] - xs[i])).clamp(0.0, 1.0);
    (1.0 - s) * ys[i] + s * ys[i + 1]
}

/// Largest relative gap between u and its double dual over the middle 90% of
/// the radial range, relative to max(1, |u|).
pub fn involution_defect(profile: &RadialProfile) -> Result<f64> {
    let back = legendre(&legendre(profile)?)?;
    let r_max = profile.r_max();
    let mut worst: f64 = 0.0;
    for (r, v) in back.r.iter().zip(&back.u) {
        if *r > 0.05 * r_max && *r < 0.95 * r_max {
            worst = worst.max((profile.eval(*r)?.0 - v).abs() / v.abs().max(1.0));
        }
    }
    Ok(worst)
}

/// Log-log fit u*(p) ≈ C p^k over a window of dual nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub constant: f64,
    /// C with the exponent held at the value supplied to the fit.
    pub constant_at_fixed_exponent: f64,
    pub points: usize,
}

pub fn fit_power_law(dual: &RadialProfile, window: (f64, f64), fixed_exponent: f64) -> Result<PowerFit> {
    let (lo, hi) = window;
    let pts: Vec<(f64, f64)> = dual
        .r
        .iter()
        .zip(&dual.u)
        .filter(|(p, v)| **p >= lo && **p <= hi && **v > 0.0)
        .map(|(p, v)| (*p, *v))
        .collect();
    if pts.len() < 5 {
        return Err(GcsfError::InsufficientDomain(format!(
            "only {} dual nodes with positive values in [{lo}, {hi}]",
            pts.len()
        )));
    }
    let xs: Vec<f64> = pts.iter().map(|(p, _)| p.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, v)| v.ln()).collect();
    let fit = linear_fit(&xs, &ys)?;
    let log_c = xs.iter().zip(&ys).map(|(x, y)| y - fixed_exponent * x).sum::<f64>() / xs.len() as f64;
    Ok(PowerFit {
        exponent: fit.slope,
        constant: fit.intercept.exp(),
        constant_at_fixed_exponent: log_c.exp(),
        points: pts.len(),
    })
}
