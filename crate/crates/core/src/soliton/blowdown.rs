use super::radial::RadialProfile;
use crate::error::{GcsfError, Result};

/// Nodes of the rescaled profile on [0, 1].
pub const BLOWDOWN_NODES: usize = 2001;

/// u_h(ρ) = u(h^{1/(1+α)}ρ)/h on [0, 1] and sup |u_h − ρ^{1+α}/(1+α)|.
pub fn blow_down(profile: &RadialProfile, alpha: f64, h: f64) -> Result<(RadialProfile, f64)> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(GcsfError::InvalidParameter(format!("h must be positive, got {h}")));
    }
    let scale = h.powf(1.0 / (1.0 + alpha));
    if scale > profile.r_max() {
        return Err(GcsfError::InsufficientDomain(format!(
            "blow-down at h = {h} needs the profile on [0, {scale}], it ends at {}",
            profile.r_max()
        )));
    }
    let n = BLOWDOWN_NODES;
    let mut rho = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let mut du = Vec::with_capacity(n);
    let mut d2u = Vec::with_capacity(n);
    let mut sup: f64 = 0.0;
    for i in 0..n {
        let x = i as f64 / (n - 1) as f64;
        let src = (scale * x).min(profile.r_max());
        let (v, dv) = profile.eval(src)?;
        let uh = v / h;
        rho.push(x);
        u.push(uh);
        du.push(scale * dv / h);
        d2u.push(scale * scale * second_derivative_at(profile, src) / h);
        sup = sup.max((uh - x.powf(1.0 + alpha) / (1.0 + alpha)).abs());
    }
    let rescaled = RadialProfile::new(profile.alpha, profile.sigma, profile.tol, rho, u, du, d2u)?;
    Ok((rescaled, sup))
}

fn second_derivative_at(p: &RadialProfile, x: f64) -> f64 {
    let i = p.r.partition_point(|ri| *ri <= x).clamp(1, p.len() - 1) - 1;
    let s = (x - p.r[i]) / (p.r[i + 1] - p.r[i]);
    (1.0 - s) * p.d2u[i] + s * p.d2u[i + 1]
}
