use serde::{Deserialize, Serialize};

use crate::error::{GcsfError, Result};

/// Ordinary least-squares line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    let n = xs.len();
    if n != ys.len() || n < 2 {
        return Err(GcsfError::InvalidInput(format!("need at least two paired points, got {n}")));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if !(sxx > 0.0) {
        return Err(GcsfError::InvalidInput("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok(LinearFit { slope, intercept, residual_rms: (ss / nf).sqrt() })
}

/// Exponential rate fitted to δ(τ) ≈ e^{intercept + rate·τ}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub rate: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub window: (f64, f64),
    pub points: usize,
}

/// Least-squares line through (τ, ln δ) for the samples with τ inside `window`.
pub fn fit_decay_rate(series: &[(f64, f64)], window: (f64, f64)) -> Result<RateFit> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(GcsfError::InvalidInput(format!("empty window ({lo}, {hi})")));
    }
    let inside: Vec<(f64, f64)> = series.iter().copied().filter(|(t, _)| *t >= lo && *t <= hi).collect();
    if inside.len() < 5 {
        return Err(GcsfError::InvalidInput(format!(
            "need at least 5 samples in window, got {}",
            inside.len()
        )));
    }
    if let Some((t, d)) = inside.iter().find(|(_, d)| !(*d > 0.0)) {
        return Err(GcsfError::InvalidInput(format!("nonpositive amplitude {d} at tau = {t}")));
    }
    let ts: Vec<f64> = inside.iter().map(|p| p.0).collect();
    let logs: Vec<f64> = inside.iter().map(|p| p.1.ln()).collect();
    let fit = linear_fit(&ts, &logs)?;
    Ok(RateFit {
        rate: fit.slope,
        intercept: fit.intercept,
        residual_rms: fit.residual_rms,
        window,
        points: inside.len(),
    })
}
