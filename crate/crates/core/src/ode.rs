//! Explicit Runge–Kutta integrators for small autonomous-or-not ODE systems:
//! Dormand–Prince 5(4) with step-size control and continuous output, and the
//! classical fixed-step 4-stage method used for convergence-order checks.

use std::ops::ControlFlow;

use crate::error::{GcsfError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rtol: 1e-10, atol: 1e-10 }
    }
}

impl Tolerance {
    pub fn uniform(tol: f64) -> Self {
        Tolerance { rtol: tol, atol: tol }
    }
}

/// How a solver advances: adaptively to a tolerance or with a fixed RK4 step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OdeMethod {
    Adaptive(Tolerance),
    FixedRk4 { h: f64 },
}

impl Default for OdeMethod {
    fn default() -> Self {
        OdeMethod::Adaptive(Tolerance::default())
    }
}

/// One accepted step with its continuous extension.
#[derive(Debug, Clone)]
pub struct AcceptedStep<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    pub f0: [f64; N],
    pub f1: [f64; N],
    cont: Option<[[f64; N]; 5]>,
}

impl<const N: usize> AcceptedStep<N> {
    pub fn h(&self) -> f64 {
        self.t1 - self.t0
    }

    /// State at `t` in [t0, t1]. Dormand–Prince steps use the method's own
    /// fourth-order interpolant, fixed steps a cubic Hermite.
    pub fn eval(&self, t: f64) -> [f64; N] {
        let h = self.h();
        let th = if h == 0.0 { 0.0 } else { (t - self.t0) / h };
        let th1 = 1.0 - th;
        let mut out = [0.0; N];
        match &self.cont {
            Some(r) => {
                for i in 0..N {
                    out[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
                }
            }
            None => {
                let h00 = (1.0 + 2.0 * th) * th1 * th1;
                let h10 = th * th1 * th1;
                let h01 = th * th * (3.0 - 2.0 * th);
                let h11 = -th * th * th1;
                for (i, o) in out.iter_mut().enumerate() {
                    *o = h00 * self.y0[i] + h10 * h * self.f0[i] + h01 * self.y1[i] + h11 * h * self.f1[i];
                }
            }
        }
        out
    }
}

/// Integration outcome.
#[derive(Debug, Clone)]
pub struct OdeEnd<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub steps: usize,
    /// True when the observer asked to stop before `t_end`.
    pub stopped: bool,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[inline]
fn combo<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        if *c != 0.0 {
            for i in 0..N {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

fn all_finite<const N: usize>(y: &[f64; N]) -> bool {
    y.iter().all(|v| v.is_finite())
}

/// Adaptive Dormand–Prince integration from `t0` to `t_end` (either direction
/// is not supported: `t_end` must exceed `t0`). The observer sees every
/// accepted step and may break early.
pub fn dopri5<const N: usize, F, O>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    tol: Tolerance,
    h_init: Option<f64>,
    mut observer: O,
) -> Result<OdeEnd<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    O: FnMut(&AcceptedStep<N>) -> ControlFlow<()>,
{
    if !(t_end > t0) {
        return Err(GcsfError::InvalidParameter(format!("t_end {t_end} must exceed t0 {t0}")));
    }
    let span = t_end - t0;
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    if !all_finite(&k1) {
        return Err(GcsfError::SolverDiverged(format!("non-finite derivative at t = {t0}")));
    }
    let mut h = h_init.unwrap_or(span * 1e-6).min(span);
    let h_min = span * 1e-15;
    let mut steps = 0usize;
    let mut rejected_in_row = 0usize;

    while t < t_end {
        if t + h > t_end {
            h = t_end - t;
        }
        let k2 = f(t + C2 * h, &combo(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &combo(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &combo(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(t + C5 * h, &combo(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(t + h, &combo(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y1 = combo(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(t + h, &y1);

        let mut err = 0.0;
        let mut finite = all_finite(&y1) && all_finite(&k7);
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = tol.atol + tol.rtol * y[i].abs().max(y1[i].abs());
            err += (e / sc).powi(2);
        }
        err = (err / N as f64).sqrt();
        if !err.is_finite() {
            finite = false;
        }

        if finite && err <= 1.0 {
            let mut r = [[0.0; N]; 5];
            for i in 0..N {
                let dy = y1[i] - y[i];
                let bspl = h * k1[i] - dy;
                r[0][i] = y[i];
                r[1][i] = dy;
                r[2][i] = bspl;
                r[3][i] = dy - h * k7[i] - bspl;
                r[4][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            let step = AcceptedStep { t0: t, t1: t + h, y0: y, y1, f0: k1, f1: k7, cont: Some(r) };
            steps += 1;
            rejected_in_row = 0;
            t += h;
            y = y1;
            k1 = k7;
            if observer(&step).is_break() {
                return Ok(OdeEnd { t, y, steps, stopped: true });
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            rejected_in_row += 1;
            h *= if finite { (0.9 * err.powf(-0.2)).clamp(0.1, 0.9) } else { 0.25 };
            if h < h_min || rejected_in_row > 200 {
                return Err(GcsfError::SolverDiverged(format!(
                    "step size underflow at t = {t} (h = {h:e})"
                )));
            }
        }
    }
    Ok(OdeEnd { t, y, steps, stopped: false })
}

/// Classical RK4 with constant step `h` (the last step is shortened to land
/// on `t_end`).
pub fn rk4_fixed<const N: usize, F, O>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    h: f64,
    mut observer: O,
) -> Result<OdeEnd<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    O: FnMut(&AcceptedStep<N>) -> ControlFlow<()>,
{
    if !(h > 0.0) || !(t_end > t0) {
        return Err(GcsfError::InvalidParameter(format!("need h > 0 and t_end > t0 (h = {h})")));
    }
    let n = ((t_end - t0) / h - 1e-9).ceil().max(1.0) as usize;
    let mut y = y0;
    let mut f0 = f(t0, &y);
    for i in 0..n {
        let t = t0 + i as f64 * h;
        let hs = if i + 1 == n { t_end - t } else { h };
        let k2 = f(t + 0.5 * hs, &combo(&y, hs, &[(0.5, &f0)]));
        let k3 = f(t + 0.5 * hs, &combo(&y, hs, &[(0.5, &k2)]));
        let k4 = f(t + hs, &combo(&y, hs, &[(1.0, &k3)]));
        let y1 = combo(&y, hs, &[(1.0 / 6.0, &f0), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)]);
        if !all_finite(&y1) {
            return Err(GcsfError::SolverDiverged(format!("non-finite state at t = {}", t + hs)));
        }
        let f1 = f(t + hs, &y1);
        let step = AcceptedStep { t0: t, t1: t + hs, y0: y, y1, f0, f1, cont: None };
        y = y1;
        f0 = f1;
        if observer(&step).is_break() {
            return Ok(OdeEnd { t: t + hs, y, steps: i + 1, stopped: true });
        }
    }
    Ok(OdeEnd { t: t_end, y, steps: n, stopped: false })
}

/// Dispatch on [`OdeMethod`].
pub fn integrate<const N: usize, F, O>(
    method: OdeMethod,
    f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    observer: O,
) -> Result<OdeEnd<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    O: FnMut(&AcceptedStep<N>) -> ControlFlow<()>,
{
    match method {
        OdeMethod::Adaptive(tol) => dopri5(f, t0, y0, t_end, tol, None, observer),
        OdeMethod::FixedRk4 { h } => rk4_fixed(f, t0, y0, t_end, h, observer),
    }
}
