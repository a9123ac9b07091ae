use crate::error::{GcsfError, Result};
use crate::table::write_columns;

/// φ = −ln(−u) for the radial solution u = (r^{1+α} − R^{1+α})/(1+α) of
/// L₀u = 1 with zero boundary values, sampled with its radial derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct LogConvexity {
    pub r: Vec<f64>,
    pub phi: Vec<f64>,
    pub phi_r: Vec<f64>,
    pub phi_rr: Vec<f64>,
}

impl LogConvexity {
    /// min over nodes of min(φ_rr, φ_r / r), the two Hessian eigenvalues.
    pub fn margin(&self) -> f64 {
        self.r
            .iter()
            .zip(self.phi_r.iter().zip(&self.phi_rr))
            .map(|(r, (d1, d2))| d2.min(d1 / r))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_csv(&self) -> String {
        write_columns(&["r", "phi", "phi_r", "phi_rr"], &[&self.r, &self.phi, &self.phi_r, &self.phi_rr])
    }
}

pub const LOG_CONVEXITY_NODES: usize = 2001;

/// Samples on [10⁻³R, (1 − 10⁻³)R].
pub fn log_convexity_samples(radius: f64, alpha: f64, n: usize) -> Result<LogConvexity> {
    if !(radius > 0.0 && radius.is_finite()) || !(alpha > 0.0 && alpha.is_finite()) || n < 2 {
        return Err(GcsfError::InvalidParameter(format!(
            "need R > 0, alpha > 0 and n >= 2 (R = {radius}, alpha = {alpha}, n = {n})"
        )));
    }
    let a1 = 1.0 + alpha;
    let (lo, hi) = (1e-3 * radius, (1.0 - 1e-3) * radius);
    let boundary = radius.powf(a1);
    let mut out = LogConvexity { r: Vec::new(), phi: Vec::new(), phi_r: Vec::new(), phi_rr: Vec::new() };
    for i in 0..n {
        let r = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        let u = (r.powf(a1) - boundary) / a1;
        let ur = r.powf(alpha);
        let urr = alpha * r.powf(alpha - 1.0);
        out.r.push(r);
        out.phi.push(-(-u).ln());
        out.phi_r.push(-ur / u);
        out.phi_rr.push((ur * ur - u * urr) / (u * u));
    }
    Ok(out)
}

pub fn radial_log_convexity(radius: f64, alpha: f64) -> Result<f64> {
    Ok(log_convexity_samples(radius, alpha, LOG_CONVEXITY_NODES)?.margin())
}
