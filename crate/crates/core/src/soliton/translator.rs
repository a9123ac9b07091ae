use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{GcsfError, Result};
use crate::ode::{integrate, OdeMethod, Tolerance};
use crate::quad;
use crate::table::write_columns;

/// Slope beyond which the solver switches to the inverse variable.
pub const SLOPE_SWITCH: f64 = 1e3;

/// One-dimensional translator v'' = (1 + v'²)^γ with γ = 3/2 − 1/(2α).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile1D {
    pub alpha: f64,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub dv: Vec<f64>,
    /// Blow-up abscissa of v' when it lies within the requested range,
    /// `None` when the profile is entire so far.
    pub domain_half_width: Option<f64>,
}

impl Profile1D {
    pub fn gamma(&self) -> f64 {
        translator_gamma(self.alpha)
    }

    pub fn x_end(&self) -> f64 {
        *self.x.last().expect("profile has nodes")
    }

    pub fn to_csv(&self) -> String {
        write_columns(&["x", "v", "dv"], &[&self.x, &self.v, &self.dv])
    }
}

pub fn translator_gamma(alpha: f64) -> f64 {
    1.5 - 0.5 / alpha
}

/// Half-width of the strip for α > ½, from the separable form
/// x = ∫₀^∞ (1 + p²)^{−γ} dp.
pub fn translator_half_width_exact(alpha: f64) -> Option<f64> {
    let g = translator_gamma(alpha);
    (g > 0.5).then(|| {
        0.5 * std::f64::consts::PI.sqrt() * (ln_gamma(g - 0.5) - ln_gamma(g)).exp()
    })
}

pub fn translator_1d(alpha: f64, x_max: f64, tol: f64) -> Result<Profile1D> {
    if !(tol > 0.0) {
        return Err(GcsfError::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    translator_1d_with(alpha, x_max, OdeMethod::Adaptive(Tolerance::uniform(tol)))
}

pub fn translator_1d_with(alpha: f64, x_max: f64, method: OdeMethod) -> Result<Profile1D> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(GcsfError::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(GcsfError::InvalidParameter(format!("x_max must be positive, got {x_max}")));
    }
    let g = translator_gamma(alpha);
    let blows_up = g > 0.5;
    let rhs = move |_x: f64, y: &[f64; 2]| [y[1], (1.0 + y[1] * y[1]).powf(g)];

    let mut prof = Profile1D { alpha, x: vec![0.0], v: vec![0.0], dv: vec![0.0], domain_half_width: None };
    let record = |prof: &mut Profile1D, x: f64, y: &[f64; 2]| {
        prof.x.push(x);
        prof.v.push(y[0]);
        prof.dv.push(y[1]);
    };

    let end = integrate(method, rhs, 0.0, [0.0, 0.0], x_max, |st| {
        record(&mut prof, st.t1, &st.y1);
        if blows_up && st.y1[1] > SLOPE_SWITCH {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    if !end.stopped {
        return Ok(prof);
    }

    let width = end.t + remaining_width(g, end.y[1]);
    if width <= x_max {
        prof.domain_half_width = Some(width);
        return Ok(prof);
    }
    // The asymptote lies beyond x_max: finish the direct integration.
    integrate(method, rhs, end.t, end.y, x_max, |st| {
        record(&mut prof, st.t1, &st.y1);
        ControlFlow::Continue(())
    })?;
    Ok(prof)
}

/// Distance from the point where v' = `slope` to the asymptote, `None` when
/// α ≤ ½ (no asymptote).
pub fn distance_to_blow_up(alpha: f64, slope: f64) -> Option<f64> {
    let g = translator_gamma(alpha);
    (g > 0.5 && slope > 0.0).then(|| remaining_width(g, slope))
}

/// ∫_P^∞ (1+p²)^{−γ} dp for 2γ > 1, computed in w = p^{1−2γ} where the
/// integrand is bounded: (1/(2γ−1)) ∫₀^{w_P} (1 + p(w)^{−2})^{−γ} dw.
fn remaining_width(g: f64, p_switch: f64) -> f64 {
    let k = 2.0 * g - 1.0;
    let w_p = p_switch.powf(-k);
    let integrand = |w: f64| {
        let inv_p2 = w.powf(2.0 / k);
        (1.0 + inv_p2).powf(-g)
    };
    quad::integrate(integrand, 0.0, w_p, 1e-14 * w_p) / k
}
