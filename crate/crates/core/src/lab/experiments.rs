//! Each experiment writes its data files (`produce`) and then derives every
//! headline scalar and check from those files alone (`derive`), so `verify`
//! can repeat the second half on an archived run.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use super::check::{Check, CheckMode};
use super::config::{Experiment, ExperimentConfig, InitialBody};
use super::LabError;
use crate::flow::{
    area_rate_defect, curvature_power_integrals, estimate_extinction_time, fit_decay_rate, linearized_mode_rate,
    normalize_trace, run_normalized, run_to_extinction, FlowParams,
};
use crate::soliton::{
    blow_down, comparison_ode, distance_to_blow_up, fit_power_law, involution_defect, legendre, nodal_defect, log_convexity_samples,
    radial_translator, translator_1d, translator_half_width_exact, ProfileHeader, RadialProfile, LOG_CONVEXITY_NODES,
};
use crate::table::{read_columns, write_columns, Table};

pub(super) type Headline = BTreeMap<String, f64>;

pub(super) struct Outcome {
    pub headline: Headline,
    pub checks: Vec<Check>,
}

struct Writer<'a> {
    dir: &'a Path,
    outputs: Vec<String>,
}

impl Writer<'_> {
    fn put(&mut self, name: &str, contents: &str) -> Result<(), LabError> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| LabError::Io(format!("{}: {e}", parent.display())))?;
        }
        fs::write(&path, contents).map_err(|e| LabError::Io(format!("{}: {e}", path.display())))?;
        self.outputs.push(name.to_string());
        Ok(())
    }
}

fn table(dir: &Path, name: &str) -> Result<Table, LabError> {
    let text = read_text(dir, name)?;
    read_columns(&text).map_err(|e| LabError::Data(format!("{name}: {e}")))
}

fn read_text(dir: &Path, name: &str) -> Result<String, LabError> {
    fs::read_to_string(dir.join(name)).map_err(|e| LabError::Data(format!("{name}: {e}")))
}

fn col<'t>(t: &'t Table, file: &str, name: &str) -> Result<&'t [f64], LabError> {
    t.column(name).map_err(|e| LabError::Data(format!("{file}: {e}")))
}

fn profile_from(dir: &Path, stem: &str) -> Result<RadialProfile, LabError> {
    let header: ProfileHeader = serde_json::from_str(&read_text(dir, &format!("{stem}.json"))?)
        .map_err(|e| LabError::Data(format!("{stem}.json: {e}")))?;
    RadialProfile::from_csv(&header, &read_text(dir, &format!("{stem}.csv"))?)
        .map_err(|e| LabError::Data(format!("{stem}.csv: {e}")))
}

fn write_profile(w: &mut Writer<'_>, stem: &str, p: &RadialProfile) -> Result<(), LabError> {
    w.put(&format!("{stem}.json"), &serde_json::to_string_pretty(&p.header()).expect("header serializes"))?;
    w.put(&format!("{stem}.csv"), &p.to_csv())
}

/// Runs the solvers and writes the data files; returns their names.
pub(super) fn produce(cfg: &ExperimentConfig, dir: &Path) -> Result<Vec<String>, LabError> {
    let mut w = Writer { dir, outputs: Vec::new() };
    let p = cfg.params;
    let s = &cfg.settings;
    match cfg.experiment {
        Experiment::Flow => {
            let trace = run_to_extinction(&cfg.body()?, &p, s.t_max)?;
            w.put("trace.csv", &trace.to_csv())?;
            w.put("trace_manifest.json", &serde_json::to_string_pretty(&trace.manifest()).expect("serializes"))?;
            trace.write_snapshots(&dir.join("snapshots")).map_err(|e| LabError::Io(format!("snapshots: {e}")))?;
            w.outputs.push("snapshots/".into());
        }
        Experiment::NormalizedRate => {
            let trace = run_to_extinction(&cfg.body()?, &p, s.t_max)?;
            let states = normalize_trace(&trace, &p)?;
            let tau: Vec<f64> = states.iter().map(|n| n.tau).collect();
            let t: Vec<f64> = states.iter().map(|n| n.t).collect();
            let amp: Vec<f64> = states.iter().map(|n| n.state.mode_amplitude(s.mode as usize)).collect();
            let delta: Vec<f64> = states
                .iter()
                .map(|n| n.state.hausdorff_to_circle(n.state.steiner_point(), 1.0).unwrap_or(f64::NAN))
                .collect();
            w.put("normalized.csv", &write_columns(&["tau", "t", "amplitude", "delta_to_circle"], &[&tau, &t, &amp, &delta]))?;
            let direct = run_normalized(&cfg.body()?, &p, s.tau_window.1)?;
            let amp: Vec<f64> = direct.states.iter().map(|st| st.mode_amplitude(s.mode as usize)).collect();
            w.put("normalized_direct.csv", &write_columns(&["tau", "amplitude"], &[&direct.taus, &amp]))?;
        }
        Experiment::Translator1d => {
            let prof = translator_1d(p.alpha, s.x_max, cfg.tol())?;
            w.put("profile.csv", &prof.to_csv())?;
        }
        Experiment::RadialTranslator => {
            let prof = radial_translator(p.alpha, p.sigma, s.r_max.unwrap_or(100.0), cfg.tol())?;
            write_profile(&mut w, "profile", &prof)?;
        }
        Experiment::Blowdown => {
            let prof = radial_translator(p.alpha, p.sigma, blowdown_extent(cfg), cfg.tol())?;
            write_profile(&mut w, "profile", &prof)?;
            let mut sups = Vec::new();
            for h in &s.h_values {
                let (rescaled, sup) = blow_down(&prof, p.alpha, *h)?;
                w.put(&format!("rescaled_h{h}.csv"), &rescaled.to_csv())?;
                sups.push(sup);
            }
            w.put("blowdown.csv", &write_columns(&["h", "sup_dist"], &[&s.h_values, &sups]))?;
        }
        Experiment::Legendre => {
            let prof = radial_translator(p.alpha, p.sigma, legendre_extent(cfg), cfg.tol())?;
            write_profile(&mut w, "profile", &prof)?;
            w.put("dual.csv", &legendre(&prof)?.to_csv())?;
        }
        Experiment::ComparisonOde => {
            let mut crossing = Vec::new();
            for (i, delta) in s.deltas.iter().enumerate() {
                let sol = comparison_ode(p.alpha, *delta, s.ode_t_max, cfg.tol())?;
                w.put(&format!("ode_{i}.csv"), &sol.to_csv())?;
                crossing.push(sol.a_cross.unwrap_or(f64::NAN));
            }
            w.put("crossings.csv", &write_columns(&["delta", "a_cross"], &[&s.deltas, &crossing]))?;
        }
        Experiment::LogConvexity => {
            for (i, radius) in s.radii.iter().enumerate() {
                let samples = log_convexity_samples(*radius, p.alpha, LOG_CONVEXITY_NODES)?;
                w.put(&format!("phi_{i}.csv"), &samples.to_csv())?;
            }
        }
        Experiment::AreaIdentity => {
            let body = cfg.body()?;
            for stride in &s.strides {
                let q = FlowParams { record_stride: *stride, ..p };
                let trace = run_to_extinction(&body, &q, s.t_max)?;
                let turning = trace
                    .states
                    .iter()
                    .map(|st| curvature_power_integrals(st, p.alpha).map(|v| v.1))
                    .collect::<crate::Result<Vec<f64>>>()?;
                w.put(
                    &format!("trace_stride{stride}.csv"),
                    &write_columns(&["t", "area", "turning"], &[&trace.times, &trace.areas, &turning]),
                )?;
            }
        }
    }
    Ok(w.outputs)
}

fn blowdown_extent(cfg: &ExperimentConfig) -> f64 {
    let s = &cfg.settings;
    s.r_max.unwrap_or_else(|| {
        let h = s.h_values.iter().cloned().fold(1.0, f64::max);
        1.02 * h.powf(1.0 / (1.0 + cfg.params.alpha)) + 1.0
    })
}

fn legendre_extent(cfg: &ExperimentConfig) -> f64 {
    // The slope grows like r^α, so this reaches past the top of the window.
    cfg.settings.r_max.unwrap_or_else(|| (1.1 * cfg.settings.p_window.1).powf(1.0 / cfg.params.alpha) + 1.0)
}

fn count_non_decreasing(v: &[f64]) -> f64 {
    v.windows(2).filter(|w| !(w[1] < w[0])).count() as f64
}

/// Recomputes headline scalars and checks from the files in `dir`.
pub(super) fn derive(cfg: &ExperimentConfig, dir: &Path) -> Result<Outcome, LabError> {
    let p = cfg.params;
    let s = &cfg.settings;
    let alpha = p.alpha;
    let mut headline = Headline::new();
    let mut checks = Vec::new();
    match cfg.experiment {
        Experiment::Flow => {
            let t = table(dir, "trace.csv")?;
            let (times, areas, inradii) =
                (col(&t, "trace.csv", "t")?, col(&t, "trace.csv", "area")?, col(&t, "trace.csv", "inradius")?);
            let extinction = estimate_extinction_time(times, inradii, alpha);
            if let Some(te) = extinction {
                headline.insert("extinction_time".into(), te);
            }
            headline.insert("final_time".into(), *times.last().unwrap_or(&f64::NAN));
            headline.insert("final_inradius".into(), *inradii.last().unwrap_or(&f64::NAN));
            checks.push(Check::at_most("area_increase_count", count_non_decreasing(areas), 0.0));
            if let Some(InitialBody::Circle { radius, .. }) = cfg.initial_body {
                let a1 = 1.0 + alpha;
                let expected = radius.powf(a1) / a1;
                headline.insert("expected_extinction_time".into(), expected);
                checks.push(Check::new(
                    "extinction_time",
                    extinction.unwrap_or(f64::NAN),
                    expected,
                    1e-4,
                    CheckMode::AbsDiff,
                ));
                let law = times
                    .iter()
                    .zip(inradii)
                    .filter(|(ti, _)| **ti <= 0.9 * expected)
                    .map(|(ti, r)| {
                        let exact = (radius.powf(a1) - a1 * ti).powf(1.0 / a1);
                        (r - exact).abs() / exact
                    })
                    .fold(0.0, f64::max);
                headline.insert("circle_law_max_rel_error".into(), law);
                checks.push(Check::at_most("circle_law_max_rel_error", law, 1e-6));
            }
        }
        Experiment::NormalizedRate => {
            let predicted = linearized_mode_rate(alpha, s.mode);
            headline.insert("predicted_rate".into(), predicted);
            for (file, key) in [("normalized.csv", "rate"), ("normalized_direct.csv", "direct_rate")] {
                let t = table(dir, file)?;
                let series: Vec<(f64, f64)> =
                    col(&t, file, "tau")?.iter().copied().zip(col(&t, file, "amplitude")?.iter().copied()).collect();
                let fit = fit_decay_rate(&series, s.tau_window)?;
                headline.insert(key.into(), fit.rate);
                headline.insert(format!("{key}_residual_rms"), fit.residual_rms);
                checks.push(Check::new(key, fit.rate, predicted, 0.05, CheckMode::RelDiff));
            }
        }
        Experiment::Translator1d => {
            let t = table(dir, "profile.csv")?;
            let (x, dv) = (col(&t, "profile.csv", "x")?, col(&t, "profile.csv", "dv")?);
            let (x_end, dv_end) = (*x.last().unwrap_or(&0.0), *dv.last().unwrap_or(&0.0));
            let width = distance_to_blow_up(alpha, dv_end).map(|d| x_end + d).filter(|w| *w <= s.x_max);
            headline.insert("blows_up".into(), if width.is_some() { 1.0 } else { 0.0 });
            headline.insert("x_end".into(), x_end);
            headline.insert("dv_end".into(), dv_end);
            if let Some(wd) = width {
                headline.insert("domain_half_width".into(), wd);
            }
            match translator_half_width_exact(alpha).filter(|w| *w <= s.x_max) {
                Some(exact) => {
                    checks.push(Check::new("domain_half_width", width.unwrap_or(f64::NAN), exact, 1e-6, CheckMode::AbsDiff))
                }
                None => checks.push(Check::at_least("entire_through_x_max", if width.is_some() { 0.0 } else { x_end }, s.x_max)),
            }
            if alpha == 0.5 {
                let err = x.iter().zip(dv).filter(|(xi, _)| **xi <= 5.0).map(|(xi, d)| (d - xi.sinh()).abs()).fold(0.0, f64::max);
                checks.push(Check::at_most("sinh_max_error", err, 1e-8));
            }
        }
        Experiment::RadialTranslator => {
            let prof = profile_from(dir, "profile")?;
            let residual = crate::soliton::l_sigma_residual(&prof, alpha, p.sigma);
            let gap = crate::soliton::l0_vs_lsigma(&prof, alpha, p.sigma);
            let growth = crate::soliton::growth_bound_check(&prof, alpha);
            headline.insert("l_sigma_residual".into(), residual);
            headline.insert("l0_gap".into(), gap);
            headline.insert("growth_constant".into(), growth);
            headline.insert("r_max".into(), prof.r_max());
            headline.insert("u_at_r_max".into(), *prof.u.last().unwrap());
            let integral = crate::soliton::l_sigma_integral_residual(&prof, alpha, p.sigma);
            headline.insert("l_sigma_integral_residual".into(), integral);
            checks.push(Check::at_most("l_sigma_residual", residual, 1e-8));
            checks.push(Check::at_most("l_sigma_integral_residual", integral, 1e-8));
            checks.push(Check::at_most("slope_non_increase_count", count_non_decreasing(&prof.du.iter().map(|v| -v).collect::<Vec<_>>()), 0.0));
            checks.push(Check::at_least("min_d2u", prof.d2u.iter().cloned().fold(f64::INFINITY, f64::min), 0.0));
            checks.push(Check::at_least("l0_gap", gap, -1e-10));
            if prof.r_max() >= 100.0 {
                checks.push(Check::at_most("growth_constant", growth, 1.1 / (1.0 + alpha)));
            }
        }
        Experiment::Blowdown => {
            let prof = profile_from(dir, "profile")?;
            let mut sups = Vec::new();
            for h in &s.h_values {
                let (_, sup) = blow_down(&prof, alpha, *h)?;
                headline.insert(format!("sup_dist_h{h}"), sup);
                sups.push(sup);
            }
            if let Some(last) = sups.last() {
                headline.insert("sup_dist".into(), *last);
            }
            if sups.len() >= 2 {
                checks.push(Check::at_most("sup_dist_non_decrease_count", count_non_decreasing(&sups), 0.0));
            }
            if alpha == 1.0 {
                if let Some(i) = s.h_values.iter().position(|h| *h == 1e4) {
                    checks.push(Check::at_most("sup_dist_h10000", sups[i], 0.01));
                }
            }
        }
        Experiment::Legendre => {
            let prof = profile_from(dir, "profile")?;
            let dual = legendre(&prof)?;
            let k = (1.0 + alpha) / alpha;
            let fit = fit_power_law(&dual, s.p_window, k)?;
            let involution = involution_defect(&prof)?;
            headline.insert("dual_exponent".into(), fit.exponent);
            headline.insert("dual_constant".into(), fit.constant_at_fixed_exponent);
            headline.insert("dual_constant_joint_fit".into(), fit.constant);
            headline.insert("involution_defect".into(), involution);
            checks.push(Check::new("dual_exponent", fit.exponent, k, 0.01, CheckMode::RelDiff));
            checks.push(Check::new("dual_constant", fit.constant_at_fixed_exponent, alpha / (1.0 + alpha), 0.02, CheckMode::RelDiff));
            checks.push(Check::at_most("involution_defect", involution, 1e-6));
        }
        Experiment::ComparisonOde => {
            let mut worst: f64 = 0.0;
            let mut scaled = Vec::new();
            for (i, delta) in s.deltas.iter().enumerate() {
                let file = format!("ode_{i}.csv");
                let t = table(dir, &file)?;
                let (ts, drho) = (col(&t, &file, "t")?, col(&t, &file, "drho")?);
                let a_cross = crossing_from_nodes(alpha, *delta, ts, drho);
                worst = worst.max(nodal_defect(alpha, *delta, ts, drho, a_cross));
                if let Some(a) = a_cross {
                    headline.insert(format!("a_cross_delta{delta:e}"), a);
                    scaled.push(a / (-delta.ln()).powf(alpha / (alpha + 1.0)));
                } else {
                    scaled.push(f64::NAN);
                }
            }
            headline.insert("closed_form_defect".into(), worst);
            checks.push(Check::at_most("closed_form_defect", worst, 1e-8));
            if !scaled.is_empty() {
                let hi = scaled.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let lo = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
                let band = if scaled.iter().any(|v| v.is_nan()) { f64::NAN } else { hi / lo };
                headline.insert("scaled_a_cross_min".into(), lo);
                headline.insert("scaled_a_cross_max".into(), hi);
                checks.push(Check::at_most("scaled_a_cross_band", band, 3.0));
            }
        }
        Experiment::LogConvexity => {
            for (i, radius) in s.radii.iter().enumerate() {
                let file = format!("phi_{i}.csv");
                let t = table(dir, &file)?;
                let (r, d1, d2) = (col(&t, &file, "r")?, col(&t, &file, "phi_r")?, col(&t, &file, "phi_rr")?);
                let margin = (0..r.len()).map(|j| d2[j].min(d1[j] / r[j])).fold(f64::INFINITY, f64::min);
                headline.insert(format!("margin_R{radius}"), margin);
                checks.push(Check::at_least(format!("margin_R{radius}"), margin, -1e-10));
            }
        }
        Experiment::AreaIdentity => {
            let mut defects = Vec::new();
            for stride in &s.strides {
                let file = format!("trace_stride{stride}.csv");
                let t = table(dir, &file)?;
                let d = area_rate_defect(col(&t, &file, "t")?, col(&t, &file, "area")?, col(&t, &file, "turning")?);
                headline.insert(format!("defect_stride{stride}"), d);
                defects.push(d);
                if alpha == 1.0 {
                    checks.push(Check::at_most(format!("defect_stride{stride}"), d, 1e-6));
                }
            }
            if alpha != 1.0 && s.strides.len() >= 2 {
                let order = (defects[0] / defects[1]).ln() / (s.strides[0] as f64 / s.strides[1] as f64).ln();
                headline.insert("observed_order".into(), order);
                checks.push(Check::new("observed_order", order, 2.0, 0.4, CheckMode::AbsDiff));
            }
        }
    }
    Ok(Outcome { headline, checks })
}

/// First crossing of ρ' = 1 from the stored nodes, using the cubic Hermite
/// interpolant with slopes ρ'' taken from the equation.
fn crossing_from_nodes(alpha: f64, delta: f64, t: &[f64], drho: &[f64]) -> Option<f64> {
    let i = drho.iter().position(|d| *d >= 1.0)?;
    if i == 0 {
        return Some(t[0]);
    }
    let slope = |k: usize| 10.0 * t[k].powf(1.0 / alpha) * drho[k] + 10.0 * delta;
    let (a, b) = (t[i - 1], t[i]);
    let f = |x: f64| crate::soliton::hermite(a, b, drho[i - 1], drho[i], slope(i - 1), slope(i), x) - 1.0;
    let (mut lo, mut hi) = (a, b);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
