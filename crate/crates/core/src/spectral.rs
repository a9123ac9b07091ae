//! Trigonometric-interpolation derivatives on the uniform periodic grid
//! θ_k = 2πk/M.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<usize, Plans>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn with_plans<R>(m: usize, f: impl FnOnce(&Plans) -> R) -> R {
    PLANS.with(|cell| {
        let mut guard = cell.borrow_mut();
        let (planner, cache) = &mut *guard;
        let plans = cache.entry(m).or_insert_with(|| Plans {
            forward: planner.plan_fft_forward(m),
            inverse: planner.plan_fft_inverse(m),
        });
        f(plans)
    })
}

/// Signed wavenumber of FFT bin `j` for an even grid of size `m`.
#[inline]
fn wavenumber(j: usize, m: usize) -> f64 {
    if j <= m / 2 {
        j as f64
    } else {
        j as f64 - m as f64
    }
}

fn apply_multiplier(samples: &[f64], multiplier: impl Fn(usize, f64) -> Complex64) -> Vec<f64> {
    let m = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    with_plans(m, |plans| {
        plans.forward.process(&mut buf);
        for (j, c) in buf.iter_mut().enumerate() {
            *c *= multiplier(j, wavenumber(j, m));
        }
        plans.inverse.process(&mut buf);
    });
    let scale = 1.0 / m as f64;
    buf.iter().map(|c| c.re * scale).collect()
}

/// First derivative. The Nyquist mode is dropped since its derivative is not
/// representable on the grid.
pub fn derivative(samples: &[f64]) -> Vec<f64> {
    let m = samples.len();
    apply_multiplier(samples, |j, k| {
        if 2 * j == m {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, k)
        }
    })
}

/// Second derivative.
pub fn second_derivative(samples: &[f64]) -> Vec<f64> {
    apply_multiplier(samples, |_, k| Complex64::new(-k * k, 0.0))
}

/// Radius of curvature s'' + s, computed with a single transform pair.
pub fn radius_of_curvature(samples: &[f64]) -> Vec<f64> {
    apply_multiplier(samples, |_, k| Complex64::new(1.0 - k * k, 0.0))
}

/// Cosine and sine coefficients (a_n, b_n) of mode `n` so that
/// s ≈ a_0 + Σ a_n cos nθ + b_n sin nθ.
pub fn fourier_mode(samples: &[f64], n: usize) -> (f64, f64) {
    let m = samples.len();
    let dtheta = std::f64::consts::TAU / m as f64;
    let (mut a, mut b) = (0.0, 0.0);
    for (k, &s) in samples.iter().enumerate() {
        let arg = (n * k % m) as f64 * dtheta;
        a += s * arg.cos();
        b += s * arg.sin();
    }
    let norm = if n == 0 || 2 * n == m { 1.0 } else { 2.0 } / m as f64;
    (a * norm, b * norm)
}
