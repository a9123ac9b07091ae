use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{GcsfError, Result};
use crate::ode::{integrate, OdeMethod, Tolerance};
use crate::table::{read_columns, write_columns};

/// End of the series start at the origin.
pub const SERIES_RADIUS: f64 = 1e-3;
/// Default output spacing of solver profiles.
pub const DEFAULT_SPACING: f64 = 0.01;

/// Rotationally symmetric function sampled with its first two radial
/// derivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub alpha: f64,
    pub sigma: f64,
    /// Solver tolerance (0 for closed-form profiles).
    pub tol: f64,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    pub d2u: Vec<f64>,
}

/// JSON header written next to a profile CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileHeader {
    pub alpha: f64,
    pub sigma: f64,
    pub r_max: f64,
    pub tol: f64,
}

impl RadialProfile {
    /// Checks shapes and the grid; convexity is checked separately by the
    /// operations that need it.
    pub fn new(alpha: f64, sigma: f64, tol: f64, r: Vec<f64>, u: Vec<f64>, du: Vec<f64>, d2u: Vec<f64>) -> Result<Self> {
        let n = r.len();
        if n < 2 || u.len() != n || du.len() != n || d2u.len() != n {
            return Err(GcsfError::InvalidInput("profile arrays must share a length of at least 2".into()));
        }
        if r[0] != 0.0 || r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(GcsfError::InvalidInput("radii must start at 0 and increase strictly".into()));
        }
        if r.iter().chain(&u).chain(&du).any(|v| !v.is_finite()) || d2u.iter().any(|v| v.is_nan()) {
            return Err(GcsfError::InvalidInput("profile contains non-finite values".into()));
        }
        Ok(RadialProfile { alpha, sigma, tol, r, u, du, d2u })
    }

    /// The cone r^{1+α}/(1+α) on `n` equally spaced radii over [0, r_max].
    pub fn cone(alpha: f64, r_max: f64, n: usize) -> Result<Self> {
        if !(alpha > 0.0 && r_max > 0.0 && n >= 2) {
            return Err(GcsfError::InvalidParameter("cone needs alpha > 0, r_max > 0, n >= 2".into()));
        }
        let r: Vec<f64> = (0..n).map(|i| r_max * i as f64 / (n - 1) as f64).collect();
        let u = r.iter().map(|x| x.powf(1.0 + alpha) / (1.0 + alpha)).collect();
        let du = r.iter().map(|x| x.powf(alpha)).collect();
        let d2u = r.iter().map(|x| alpha * x.powf(alpha - 1.0)).collect();
        RadialProfile::new(alpha, 0.0, 0.0, r, u, du, d2u)
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn r_max(&self) -> f64 {
        self.r[self.r.len() - 1]
    }

    pub fn header(&self) -> ProfileHeader {
        ProfileHeader { alpha: self.alpha, sigma: self.sigma, r_max: self.r_max(), tol: self.tol }
    }

    /// u and u_r at `x` by cubic Hermite interpolation of (u, du), and of
    /// (du, d2u) for the slope.
    pub fn eval(&self, x: f64) -> Result<(f64, f64)> {
        if !(0.0..=self.r_max()).contains(&x) {
            return Err(GcsfError::InsufficientDomain(format!("radius {x} outside [0, {}]", self.r_max())));
        }
        let i = self.r.partition_point(|ri| *ri <= x).clamp(1, self.len() - 1) - 1;
        let (a, b) = (self.r[i], self.r[i + 1]);
        let u = hermite(a, b, self.u[i], self.u[i + 1], self.du[i], self.du[i + 1], x);
        let du = if self.d2u[i].is_finite() && self.d2u[i + 1].is_finite() {
            hermite(a, b, self.du[i], self.du[i + 1], self.d2u[i], self.d2u[i + 1], x)
        } else {
            let s = (x - a) / (b - a);
            (1.0 - s) * self.du[i] + s * self.du[i + 1]
        };
        Ok((u, du))
    }

    /// Convexity invariants: du(0) = 0, du ≥ 0, d2u ≥ 0 and u(0) minimal.
    pub fn check_convex(&self) -> Result<()> {
        if self.du[0] != 0.0 {
            return Err(GcsfError::InvalidInput(format!("du(0) = {} is not 0", self.du[0])));
        }
        if let Some(i) = self.du.iter().position(|d| *d < 0.0) {
            return Err(GcsfError::InvalidInput(format!("du < 0 at r = {}", self.r[i])));
        }
        if let Some(i) = self.d2u.iter().position(|d| *d < 0.0) {
            return Err(GcsfError::InvalidInput(format!("d2u < 0 at r = {}", self.r[i])));
        }
        if self.u.iter().any(|v| *v < self.u[0]) {
            return Err(GcsfError::InvalidInput("u(0) is not the minimum".into()));
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        write_columns(&["r", "u", "du", "d2u"], &[&self.r, &self.u, &self.du, &self.d2u])
    }

    pub fn from_csv(header: &ProfileHeader, text: &str) -> Result<Self> {
        let t = read_columns(text)?;
        RadialProfile::new(
            header.alpha,
            header.sigma,
            header.tol,
            t.column("r")?.to_vec(),
            t.column("u")?.to_vec(),
            t.column("du")?.to_vec(),
            t.column("d2u")?.to_vec(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("profile serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: RadialProfile = serde_json::from_str(text).map_err(|e| GcsfError::InvalidInput(e.to_string()))?;
        RadialProfile::new(p.alpha, p.sigma, p.tol, p.r, p.u, p.du, p.d2u)
    }
}

pub(crate) fn hermite(a: f64, b: f64, ya: f64, yb: f64, da: f64, db: f64, x: f64) -> f64 {
    let h = b - a;
    let s = (x - a) / h;
    let s1 = 1.0 - s;
    (1.0 + 2.0 * s) * s1 * s1 * ya + s * s1 * s1 * h * da + s * s * (3.0 - 2.0 * s) * yb - s * s * s1 * h * db
}

/// Options for [`radial_translator_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialOptions {
    pub alpha: f64,
    pub sigma: f64,
    pub r_max: f64,
    /// Output spacing beyond the series start.
    pub spacing: f64,
    pub method: OdeMethod,
}

impl RadialOptions {
    pub fn new(alpha: f64, sigma: f64, r_max: f64, tol: f64) -> Self {
        RadialOptions {
            alpha,
            sigma,
            r_max,
            spacing: DEFAULT_SPACING,
            method: OdeMethod::Adaptive(Tolerance::uniform(tol)),
        }
    }
}

/// u_rr(0) = σ^β/2 and the next Taylor coefficient of u_r = c r + d r³,
/// with β = 1/2 − 1/(2α).
pub fn origin_series(alpha: f64, sigma: f64) -> (f64, f64) {
    let beta = 0.5 - 0.5 / alpha;
    let c = 0.5 * sigma.powf(beta);
    let d = c * c * c * (2.0 * beta + 1.0) / (4.0 * sigma);
    (c, d)
}

/// u_rr solved from L_σ u = 1 given (r, u_r).
pub fn radial_second_derivative(alpha: f64, sigma: f64, r: f64, w: f64) -> f64 {
    let q = sigma + w * w;
    (q / sigma) * (q.powf(0.5 - 0.5 / alpha) - w / r)
}

pub fn radial_translator(alpha: f64, sigma: f64, r_max: f64, tol: f64) -> Result<RadialProfile> {
    if !(tol > 0.0) {
        return Err(GcsfError::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    radial_translator_with(&RadialOptions::new(alpha, sigma, r_max, tol))
}

/// Radial solution of L_σ u = 1 with u(0) = u_r(0) = 0.
pub fn radial_translator_with(opts: &RadialOptions) -> Result<RadialProfile> {
    let RadialOptions { alpha, sigma, r_max, spacing, method } = *opts;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(GcsfError::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(GcsfError::InvalidParameter(format!("sigma must lie in (0, 1], got {sigma}")));
    }
    if !(r_max > SERIES_RADIUS && r_max.is_finite()) {
        return Err(GcsfError::InvalidParameter(format!("r_max must exceed {SERIES_RADIUS}, got {r_max}")));
    }
    if !(spacing > 0.0) {
        return Err(GcsfError::InvalidParameter(format!("spacing must be positive, got {spacing}")));
    }
    let tol = match method {
        OdeMethod::Adaptive(t) => t.rtol,
        OdeMethod::FixedRk4 { .. } => 0.0,
    };

    let (c, d) = origin_series(alpha, sigma);
    let r1 = SERIES_RADIUS;
    let y1 = [c * r1 * r1 / 2.0 + d * r1.powi(4) / 4.0, c * r1 + d * r1.powi(3)];

    let mut r = vec![0.0, r1];
    let mut u = vec![0.0, y1[0]];
    let mut du = vec![0.0, y1[1]];
    let mut d2u = vec![c, radial_second_derivative(alpha, sigma, r1, y1[1])];

    let mut k = (r1 / spacing).floor() as usize + 1;
    let mut push = |x: f64, y: [f64; 2]| {
        r.push(x);
        u.push(y[0]);
        du.push(y[1]);
        d2u.push(radial_second_derivative(alpha, sigma, x, y[1]));
    };
    let rhs = |x: f64, y: &[f64; 2]| [y[1], radial_second_derivative(alpha, sigma, x, y[1])];
    integrate(method, rhs, r1, y1, r_max, |st| {
        loop {
            let x = k as f64 * spacing;
            if x >= r_max * (1.0 - 1e-12) || x > st.t1 {
                break;
            }
            push(x, st.eval(x));
            k += 1;
        }
        if st.t1 >= r_max {
            push(r_max, st.y1);
        }
        ControlFlow::Continue(())
    })?;
    let prof = RadialProfile::new(alpha, sigma, tol, r, u, du, d2u)?;
    if let Some(i) = prof.du.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(GcsfError::SolverDiverged(format!("slope stopped increasing at r = {}", prof.r[i + 1])));
    }
    Ok(prof)
}

fn l_sigma_at(alpha: f64, sigma: f64, r: f64, w: f64, dw: f64) -> f64 {
    if sigma == 0.0 {
        return w.powf(1.0 / alpha) / r;
    }
    let q = sigma + w * w;
    q.powf(0.5 / alpha - 0.5) * (sigma * dw / q + w / r)
}

/// max over r > 0 of |L_σ(u) − 1| using the stored derivatives.
pub fn l_sigma_residual(profile: &RadialProfile, alpha: f64, sigma: f64) -> f64 {
    (1..profile.len())
        .map(|i| (l_sigma_at(alpha, sigma, profile.r[i], profile.du[i], profile.d2u[i]) - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Integral form of the residual that does not trust the stored `d2u`: on
/// every equally spaced window of five nodes, compares du(r+2h) − du(r−2h)
/// with Boole's rule applied to u'' recomputed from (r, du) by the equation.
/// The mismatch, as an error in the mean of u'' over the window, is mapped
/// into L_σ units through the factor σ(σ + u_r²)^{1/(2α) − 3/2} multiplying
/// u_rr in the operator.
pub fn l_sigma_integral_residual(profile: &RadialProfile, alpha: f64, sigma: f64) -> f64 {
    let (r, w) = (&profile.r, &profile.du);
    let f = |i: usize| {
        if r[i] == 0.0 {
            profile.d2u[0]
        } else {
            radial_second_derivative(alpha, sigma, r[i], w[i])
        }
    };
    (2..profile.len().saturating_sub(2))
        .filter(|&i| {
            let h = r[i] - r[i - 1];
            (-2..2).all(|k: isize| {
                let j = (i as isize + k) as usize;
                (r[j + 1] - r[j] - h).abs() <= 1e-9 * h
            })
        })
        .map(|i| {
            let h = r[i] - r[i - 1];
            let jump = w[i + 2] - w[i - 2];
            let boole = 2.0 * h / 45.0 * (7.0 * (f(i - 2) + f(i + 2)) + 32.0 * (f(i - 1) + f(i + 1)) + 12.0 * f(i));
            let q = sigma + w[i] * w[i];
            sigma * q.powf(0.5 / alpha - 1.5) * (jump - boole).abs() / (4.0 * h)
        })
        .fold(0.0, f64::max)
}

/// min over r > 0 of L_σ(u) − L₀(u), with L₀(u) = u_r^{1/α}/r.
pub fn l0_vs_lsigma(profile: &RadialProfile, alpha: f64, sigma: f64) -> f64 {
    (1..profile.len())
        .map(|i| {
            let (r, w) = (profile.r[i], profile.du[i]);
            l_sigma_at(alpha, sigma, r, w, profile.d2u[i]) - l_sigma_at(alpha, 0.0, r, w, 0.0)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Least C with u ≤ C(1 + r^{1+α}) on the profile's nodes.
pub fn growth_bound_check(profile: &RadialProfile, alpha: f64) -> f64 {
    profile
        .r
        .iter()
        .zip(&profile.u)
        .map(|(r, u)| u / (1.0 + r.powf(1.0 + alpha)))
        .fold(0.0, f64::max)
}
