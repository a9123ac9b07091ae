//! Acceptance suite: evaluates the twelve numbered criteria at their stated
//! tolerances and prints one PASS/FAIL line per criterion. Exits non-zero if
//! any criterion fails. Reference values are computed here from closed forms
//! or independent quadrature, never taken from the library under test.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use gcsf::flow::{
    area_rate_check, fit_decay_rate, jensen_bound_check, normalize_trace, run_to_extinction, FlowParams, StopReason,
};
use gcsf::soliton::{
    blow_down, comparison_ode, fit_power_law, involution_defect, l0_vs_lsigma, l_sigma_integral_residual, l_sigma_residual,
    legendre, growth_bound_check, radial_log_convexity, radial_translator, translator_1d, RadialProfile,
};
use gcsf::{PlanePoint, SupportFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn unit_circle() -> SupportFunction {
    SupportFunction::circle(1.0, PlanePoint::ORIGIN, 256).unwrap()
}

fn c1_extinction_time() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for alpha in [0.6, 1.0, 2.0] {
        let start = Instant::now();
        let trace = run_to_extinction(&unit_circle(), &FlowParams::with_alpha(alpha), 10.0).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let expected = 1.0 / (1.0 + alpha);
        let err = trace.extinction_time.map_or(f64::INFINITY, |t| (t - expected).abs());
        pass &= trace.stop_reason == StopReason::Extinct && err <= 1e-4 && secs <= 10.0;
        parts.push(format!("a={alpha}: |T-1/(1+a)|={err:.1e} in {secs:.2}s"));
    }
    outcome(pass, parts.join("; "))
}

fn c2_circle_law() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for alpha in [0.6, 1.0, 2.0] {
        let a1: f64 = 1.0 + alpha;
        let trace = run_to_extinction(&unit_circle(), &FlowParams::with_alpha(alpha), 10.0).unwrap();
        let mut err: f64 = 0.0;
        for (t, s) in trace.times.iter().zip(&trace.states).filter(|(t, _)| **t <= 0.9 / a1) {
            let exact = (1.0 - a1 * t).powf(1.0 / a1);
            err = err.max((s.mean_radius() - exact).abs() / exact);
        }
        worst = worst.max(err);
        parts.push(format!("a={alpha}: {err:.1e}"));
    }
    outcome(worst <= 1e-6, format!("max rel error {}", parts.join(", ")))
}

fn c3_linearized_rate() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for alpha in [0.6, 1.0, 1.5] {
        let p = FlowParams::with_alpha(alpha);
        let s0 = SupportFunction::fourier(1.0, &[(2, 1e-3, 0.0)], 256).unwrap();
        let trace = run_to_extinction(&s0, &p, 10.0).unwrap();
        let series: Vec<(f64, f64)> =
            normalize_trace(&trace, &p).unwrap().iter().map(|n| (n.tau, n.state.mode_amplitude(2))).collect();
        let rate = fit_decay_rate(&series, (1.0, 3.0)).unwrap().rate;
        let expected = 1.0 - 3.0 * alpha;
        let rel = ((rate - expected) / expected).abs();
        pass &= rel <= 0.05;
        parts.push(format!("a={alpha}: {rate:.4} vs {expected:.2} ({:.2}%)", 100.0 * rel));
    }
    outcome(pass, parts.join("; "))
}

fn c4_translator_dichotomy() -> Outcome {
    let tan = translator_1d(1.0, 20.0, 1e-10).unwrap();
    let width_err = tan.domain_half_width.map_or(f64::INFINITY, |w| (w - FRAC_PI_2).abs());
    let sinh = translator_1d(0.5, 20.0, 1e-10).unwrap();
    let sinh_err = sinh
        .x
        .iter()
        .zip(&sinh.dv)
        .filter(|(x, _)| **x <= 5.0)
        .map(|(x, dv)| (dv - x.sinh()).abs())
        .fold(0.0, f64::max);
    let entire = [0.3, 0.4, 0.5].iter().all(|&alpha| {
        let p = translator_1d(alpha, 20.0, 1e-10).unwrap();
        p.domain_half_width.is_none() && p.x_end() >= 20.0
    });
    outcome(
        width_err <= 1e-6 && sinh_err <= 1e-8 && entire,
        format!("|w-pi/2|={width_err:.1e}, sinh error {sinh_err:.1e}, entire on [0,20] for a<=1/2: {entire}"),
    )
}

fn c5_blow_down() -> Outcome {
    let hs = [1e1, 1e2, 1e3, 1e4];
    let mut pass = true;
    let mut parts = Vec::new();
    for alpha in [0.8, 1.0, 1.5] {
        let r_max = 1.02 * 1e4f64.powf(1.0 / (1.0 + alpha)) + 1.0;
        let u = radial_translator(alpha, 1.0, r_max, 1e-10).unwrap();
        let sups: Vec<f64> = hs.iter().map(|h| blow_down(&u, alpha, *h).unwrap().1).collect();
        pass &= sups.windows(2).all(|w| w[1] < w[0]);
        if alpha == 1.0 {
            pass &= sups[3] <= 0.01;
        }
        parts.push(format!("a={alpha}: {}", sups.iter().map(|s| format!("{s:.2e}")).collect::<Vec<_>>().join(">")));
    }
    outcome(pass, parts.join("; "))
}

fn c6_operator_identities() -> Outcome {
    let mut residual: f64 = 0.0;
    let mut integral: f64 = 0.0;
    let mut gaps = Vec::new();
    for alpha in [0.6, 0.8, 1.0, 1.5, 2.0] {
        for sigma in [0.25, 1.0] {
            let u = radial_translator(alpha, sigma, 100.0, 1e-12).unwrap();
            residual = residual.max(l_sigma_residual(&u, alpha, sigma));
            integral = integral.max(l_sigma_integral_residual(&u, alpha, sigma));
            gaps.push((alpha, sigma, l0_vs_lsigma(&u, alpha, sigma)));
        }
    }
    let mut cone: f64 = 0.0;
    for alpha in [0.6, 1.0, 2.0] {
        let c = RadialProfile::cone(alpha, 10.0, 1001).unwrap();
        // L_0 of the cone in closed form at every node: (r^a)^{1/a}/r = 1.
        let l0 = c.r.iter().zip(&c.du).skip(1).map(|(r, w)| (w.powf(1.0 / alpha) / r - 1.0).abs()).fold(0.0, f64::max);
        cone = cone.max(l0).max(l_sigma_residual(&c, alpha, 0.0));
    }
    let gap = gaps.iter().map(|g| g.2).fold(f64::INFINITY, f64::min);
    let negative: Vec<String> =
        gaps.iter().filter(|g| g.2 < -1e-10).map(|(a, s, g)| format!("a={a},s={s}:{g:.2}")).collect();
    let low = gaps.iter().filter(|g| g.0 <= 1.0).map(|g| g.2).fold(f64::INFINITY, f64::min);
    outcome(
        residual <= 1e-8 && integral <= 1e-8 && gap >= -1e-10 && cone <= 1e-10,
        format!(
            "residual {residual:.1e} (integral form {integral:.1e}); cone L0 {cone:.1e}; min gap {gap:.2e} (a<=1: {low:.2e}); negative gaps [{}]",
            negative.join(" ")
        ),
    )
}

/// Adaptive Simpson quadrature with a per-panel relative tolerance, used as
/// the reference for the comparison ODE.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rtol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, rtol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (flm, frm) = (f(0.5 * (a + m)), f(0.5 * (m + b)));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * rtol * (left + right).abs() {
            return left + right + diff / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, rtol, depth - 1) + step(f, m, b, fm, frm, fb, right, rtol, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    step(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), rtol, 40)
}

fn c7_comparison_ode() -> Outcome {
    let deltas = [1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8];
    let mut defect: f64 = 0.0;
    let mut pass = true;
    let mut bands = Vec::new();
    for alpha in [0.6, 1.0, 2.0] {
        let (q, k) = ((alpha + 1.0) / alpha, 10.0 * alpha / (alpha + 1.0));
        let mut scaled = Vec::new();
        for delta in deltas {
            let sol = comparison_ode(alpha, delta, 20.0, 1e-10).unwrap();
            let end = sol.a_cross.unwrap_or(f64::INFINITY);
            for (t, d) in sol.t.iter().zip(&sol.drho).filter(|(t, _)| **t > 0.0 && **t <= end) {
                let tq = t.powf(q);
                let exact = 10.0 * delta * simpson(&|s: f64| (k * (tq - s.powf(q))).exp(), 0.0, *t, 1e-13);
                defect = defect.max(((d - exact) / exact).abs());
            }
            scaled.push(sol.a_cross.map_or(f64::NAN, |a| a / (-delta.ln()).powf(alpha / (alpha + 1.0))));
        }
        let hi = scaled.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
        let band = hi / lo;
        pass &= scaled.iter().all(|s| s.is_finite()) && band <= 3.0;
        bands.push(format!("a={alpha}: {band:.3}"));
    }
    outcome(pass && defect <= 1e-8, format!("closed-form defect {defect:.1e}; band ratio {}", bands.join(", ")))
}

fn c8_area_identity() -> Outcome {
    let p = FlowParams { m: 128, record_stride: 10, ..FlowParams::with_alpha(1.0) };
    let trace = run_to_extinction(&SupportFunction::ellipse(1.5, 1.0, 128).unwrap(), &p, 10.0).unwrap();
    let d1 = area_rate_check(&trace, &p);
    let mut pass = d1 <= 1e-6;
    let mut parts = vec![format!("a=1 defect {d1:.1e}")];
    for alpha in [0.6, 2.0] {
        let strides = [40usize, 20, 10];
        let defects: Vec<f64> = strides
            .iter()
            .map(|&stride| {
                let q = FlowParams { m: 64, record_stride: stride, stop_inradius: 0.3, ..FlowParams::with_alpha(alpha) };
                let tr = run_to_extinction(&SupportFunction::ellipse(1.3, 1.0, 64).unwrap(), &q, 10.0).unwrap();
                area_rate_check(&tr, &q)
            })
            .collect();
        // Least-squares slope of log(defect) against log(stride).
        let xs: Vec<f64> = strides.iter().map(|s| (*s as f64).ln()).collect();
        let ys: Vec<f64> = defects.iter().map(|d| d.ln()).collect();
        let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
        let order = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
        pass &= (1.7..=2.3).contains(&order);
        parts.push(format!("a={alpha}: order {order:.2}"));
    }
    outcome(pass, parts.join("; "))
}

fn c9_log_convexity() -> Outcome {
    let mut margin = f64::INFINITY;
    for alpha in [0.7, 1.0, 2.0] {
        for radius in [0.5, 1.0, 2.0] {
            margin = margin.min(radial_log_convexity(radius, alpha).unwrap());
        }
    }
    outcome(margin >= -1e-10, format!("min margin {margin:.3e}"))
}

fn c10_legendre() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for alpha in [1.0, 2.0] {
        let r_max = (1.1f64 * 100.0).powf(1.0 / alpha) + 1.0;
        let u = radial_translator(alpha, 1.0, r_max, 1e-12).unwrap();
        let dual = legendre(&u).unwrap();
        let k = (1.0 + alpha) / alpha;
        let c = alpha / (1.0 + alpha);
        let fit = fit_power_law(&dual, (50.0, 100.0), k).unwrap();
        let e_rel = (fit.exponent - k).abs() / k;
        let c_rel = (fit.constant_at_fixed_exponent - c).abs() / c;
        pass &= e_rel <= 0.01 && c_rel <= 0.02;
        parts.push(format!(
            "a={alpha}: exponent {:.5} ({:+.2}%), constant {:.5} ({:+.2}%; joint fit {:.4})",
            fit.exponent,
            100.0 * (fit.exponent - k) / k,
            fit.constant_at_fixed_exponent,
            100.0 * (fit.constant_at_fixed_exponent - c) / c,
            fit.constant
        ));
    }
    outcome(pass, parts.join("; "))
}

fn c11_growth_bound() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for alpha in [0.6, 0.8, 1.0, 1.5, 2.0] {
        let u = radial_translator(alpha, 1.0, 100.0, 1e-10).unwrap();
        let c = growth_bound_check(&u, alpha);
        let bound = 1.1 / (1.0 + alpha);
        pass &= c <= bound;
        parts.push(format!("a={alpha}: {c:.4}<={bound:.4}"));
    }
    outcome(pass, parts.join(", "))
}

fn c12_property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut iso = 0;
    let mut jensen = 0;
    for _ in 0..100 {
        let s = SupportFunction::random_convex(&mut rng, 10, 0.3, 256).unwrap();
        let (l, a) = (s.length(), s.area());
        iso += usize::from(l * l >= 4.0 * PI * a);
        jensen += usize::from([1.0, 1.5, 2.0].iter().all(|&alpha| {
            let (lhs, rhs) = jensen_bound_check(&s, &FlowParams::with_alpha(alpha)).unwrap();
            lhs >= rhs * (1.0 - 1e-12)
        }));
    }
    let mut involution: f64 = 0.0;
    for alpha in [0.8, 1.0, 2.0] {
        involution = involution.max(involution_defect(&RadialProfile::cone(alpha, 5.0, 2001).unwrap()).unwrap());
    }
    for (alpha, r_max) in [(0.8, 50.0), (1.0, 50.0), (1.5, 20.0)] {
        involution = involution.max(involution_defect(&radial_translator(alpha, 1.0, r_max, 1e-10).unwrap()).unwrap());
    }
    let mut circle_err: f64 = 0.0;
    for m in [64, 128, 256] {
        let c = SupportFunction::circle(1.3, PlanePoint::new(0.2, -0.4).unwrap(), m).unwrap();
        circle_err = circle_err.max((c.area() - PI * 1.69).abs()).max((c.length() - TAU * 1.3).abs());
    }
    let errs: Vec<f64> =
        [64, 128, 256].iter().map(|m| (SupportFunction::ellipse(5.0, 1.0, *m).unwrap().area() - 5.0 * PI).abs()).collect();
    let spectral = circle_err <= 1e-12 && errs[1] < 1e-3 * errs[0] && errs[2] < 1e-10;
    outcome(
        iso == 100 && jensen == 100 && involution <= 1e-6 && spectral,
        format!(
            "isoperimetric {iso}/100, Jensen {jensen}/100, involution {involution:.1e}, circle {circle_err:.1e}, ellipse(5,1) area error {:.1e}>{:.1e}>{:.1e}",
            errs[0], errs[1], errs[2]
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("extinction time", c1_extinction_time),
        ("shrinking-circle law", c2_circle_law),
        ("linearized rate", c3_linearized_rate),
        ("translator dichotomy", c4_translator_dichotomy),
        ("blow-down", c5_blow_down),
        ("operator identities", c6_operator_identities),
        ("comparison ODE", c7_comparison_ode),
        ("area identity", c8_area_identity),
        ("log-convexity", c9_log_convexity),
        ("Legendre asymptotics", c10_legendre),
        ("growth bound", c11_growth_bound),
        ("property suites", c12_property_suites),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "{} {:>2} {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/12 passed in {:.1}s", 12 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
