//! Convex plane curves stored as support-function samples on a uniform
//! periodic angle grid, plus the static geometric quantities derived from
//! them.
//!
//! For a smooth strictly convex body the boundary point with outer normal
//! (cos θ, sin θ) has radius of curvature s''(θ) + s(θ); convexity of a sampled
//! curve is therefore positivity of that quantity at every node.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GcsfError, Result};
use crate::spectral;

/// Smallest accepted grid.
pub const MIN_GRID: usize = 64;
/// Grid used when callers do not care.
pub const DEFAULT_GRID: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const ORIGIN: PlanePoint = PlanePoint { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(GcsfError::InvalidParameter(format!("non-finite point ({x}, {y})")));
        }
        Ok(PlanePoint { x, y })
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

impl std::ops::Neg for PlanePoint {
    type Output = PlanePoint;
    fn neg(self) -> PlanePoint {
        PlanePoint { x: -self.x, y: -self.y }
    }
}

impl std::ops::Add for PlanePoint {
    type Output = PlanePoint;
    fn add(self, o: PlanePoint) -> PlanePoint {
        PlanePoint { x: self.x + o.x, y: self.y + o.y }
    }
}

pub(crate) fn check_grid(m: usize) -> Result<()> {
    if m < MIN_GRID || !m.is_multiple_of(2) {
        return Err(GcsfError::InvalidParameter(format!(
            "grid size must be even and >= {MIN_GRID}, got {m}"
        )));
    }
    Ok(())
}

/// Angle of grid node `k` on a grid of `m` nodes.
#[inline]
pub fn grid_angle(k: usize, m: usize) -> f64 {
    TAU * k as f64 / m as f64
}

/// Support function of a convex body sampled at θ_k = 2πk/M.
///
/// Every value of this type has finite samples, an even grid of at least
/// [`MIN_GRID`] nodes and a strictly positive radius of curvature at every node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportFunction {
    m: usize,
    samples: Vec<f64>,
}

#[derive(Deserialize)]
struct SupportFunctionRepr {
    m: usize,
    samples: Vec<f64>,
}

impl<'de> Deserialize<'de> for SupportFunction {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = SupportFunctionRepr::deserialize(de)?;
        if repr.m != repr.samples.len() {
            return Err(serde::de::Error::custom(format!(
                "m = {} but {} samples",
                repr.m,
                repr.samples.len()
            )));
        }
        SupportFunction::new(repr.samples).map_err(serde::de::Error::custom)
    }
}

impl SupportFunction {
    /// Validates grid size, finiteness and convexity.
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        check_grid(samples.len())?;
        if let Some(bad) = samples.iter().position(|v| !v.is_finite()) {
            return Err(GcsfError::InvalidParameter(format!("non-finite sample at node {bad}")));
        }
        let s = SupportFunction { m: samples.len(), samples };
        s.curvature_radius()?;
        Ok(s)
    }

    /// Skips the convexity test. Callers guarantee the invariant.
    pub(crate) fn from_trusted(samples: Vec<f64>) -> Self {
        SupportFunction { m: samples.len(), samples }
    }

    /// s(θ) = R + c·(cos θ, sin θ).
    pub fn circle(radius: f64, center: PlanePoint, m: usize) -> Result<Self> {
        check_grid(m)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GcsfError::InvalidParameter(format!("circle radius must be positive, got {radius}")));
        }
        let samples = (0..m)
            .map(|k| {
                let t = grid_angle(k, m);
                radius + center.x * t.cos() + center.y * t.sin()
            })
            .collect();
        SupportFunction::new(samples)
    }

    /// Origin-centred ellipse with semi-axes `a` along x and `b` along y.
    pub fn ellipse(a: f64, b: f64, m: usize) -> Result<Self> {
        check_grid(m)?;
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(GcsfError::InvalidParameter(format!("ellipse axes must be positive, got ({a}, {b})")));
        }
        let samples = (0..m)
            .map(|k| {
                let t = grid_angle(k, m);
                (a * a * t.cos().powi(2) + b * b * t.sin().powi(2)).sqrt()
            })
            .collect();
        SupportFunction::new(samples)
    }

    /// s(θ) = mean + Σ a_n cos nθ + b_n sin nθ for `(n, a_n, b_n)` in `modes`.
    pub fn fourier(mean: f64, modes: &[(usize, f64, f64)], m: usize) -> Result<Self> {
        check_grid(m)?;
        let samples = (0..m)
            .map(|k| {
                let t = grid_angle(k, m);
                mean + modes
                    .iter()
                    .map(|&(n, a, b)| a * (n as f64 * t).cos() + b * (n as f64 * t).sin())
                    .sum::<f64>()
            })
            .collect();
        SupportFunction::new(samples)
    }

    /// Draws a random convex body s = 1 + Σ_{n=2}^{terms} a_n cos nθ + b_n sin nθ
    /// with |a_n|, |b_n| ≤ c/n³, rejecting draws that fail the convexity test.
    pub fn random_convex<R: Rng + ?Sized>(rng: &mut R, terms: usize, c: f64, m: usize) -> Result<Self> {
        check_grid(m)?;
        if terms < 2 || !(c > 0.0) {
            return Err(GcsfError::InvalidParameter(format!(
                "random body needs terms >= 2 and c > 0, got terms = {terms}, c = {c}"
            )));
        }
        for _ in 0..10_000 {
            let modes: Vec<(usize, f64, f64)> = (2..=terms)
                .map(|n| {
                    let bound = c / (n as f64).powi(3);
                    (n, rng.random_range(-bound..=bound), rng.random_range(-bound..=bound))
                })
                .collect();
            if let Ok(s) = SupportFunction::fourier(1.0, &modes, m) {
                return Ok(s);
            }
        }
        Err(GcsfError::InvalidParameter(format!("c = {c} too large: no convex draw in 10000 attempts")))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn dtheta(&self) -> f64 {
        TAU / self.m as f64
    }

    pub fn theta(&self, k: usize) -> f64 {
        grid_angle(k, self.m)
    }

    /// Radius of curvature s'' + s at every node.
    pub fn curvature_radius(&self) -> Result<Vec<f64>> {
        let r = spectral::radius_of_curvature(&self.samples);
        check_convex(&r)?;
        Ok(r)
    }

    /// Enclosed area ½∮(s² − s'²)dθ.
    pub fn area(&self) -> f64 {
        let ds = spectral::derivative(&self.samples);
        0.5 * self.dtheta() * self.samples.iter().zip(&ds).map(|(s, d)| s * s - d * d).sum::<f64>()
    }

    /// Perimeter ∮ s dθ.
    pub fn length(&self) -> f64 {
        self.dtheta() * self.samples.iter().sum::<f64>()
    }

    /// (1/π)∮ s(θ)(cos θ, sin θ) dθ.
    pub fn steiner_point(&self) -> PlanePoint {
        let (a1, b1) = spectral::fourier_mode(&self.samples, 1);
        PlanePoint { x: a1, y: b1 }
    }

    /// Support function of the body translated by `v`.
    pub fn translate(&self, v: PlanePoint) -> SupportFunction {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let t = self.theta(k);
                s + v.x * t.cos() + v.y * t.sin()
            })
            .collect();
        SupportFunction::from_trusted(samples)
    }

    /// Translate so the Steiner point sits at the origin.
    pub fn recenter(&self) -> SupportFunction {
        self.translate(-self.steiner_point())
    }

    /// Dilation about the origin.
    pub fn scale(&self, factor: f64) -> Result<SupportFunction> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(GcsfError::InvalidParameter(format!("scale factor must be positive, got {factor}")));
        }
        Ok(SupportFunction::from_trusted(self.samples.iter().map(|s| s * factor).collect()))
    }

    /// Sup-norm distance between the support function seen from `center` and
    /// the constant `radius`: the Hausdorff distance to the disc of that radius
    /// about `center`.
    pub fn hausdorff_to_circle(&self, center: PlanePoint, radius: f64) -> Result<f64> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GcsfError::InvalidParameter(format!("radius must be positive, got {radius}")));
        }
        let mut worst: f64 = 0.0;
        for (k, s) in self.samples.iter().enumerate() {
            let t = self.theta(k);
            let seen = s - center.x * t.cos() - center.y * t.sin();
            if seen <= 0.0 {
                return Err(GcsfError::InvalidParameter(format!(
                    "center ({}, {}) is not strictly inside the body",
                    center.x, center.y
                )));
            }
            worst = worst.max((seen - radius).abs());
        }
        Ok(worst)
    }

    /// Radius of the largest disc about the Steiner point inside the body.
    pub fn inradius(&self) -> f64 {
        self.recenter().samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Radius of the smallest disc about the Steiner point containing the body.
    pub fn circumradius(&self) -> f64 {
        self.recenter().samples.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Mean radius L/2π.
    pub fn mean_radius(&self) -> f64 {
        self.length() / TAU
    }

    /// Cosine/sine coefficients of Fourier mode `n`.
    pub fn fourier_mode(&self, n: usize) -> (f64, f64) {
        spectral::fourier_mode(&self.samples, n)
    }

    /// Amplitude √(a_n² + b_n²) of Fourier mode `n`.
    pub fn mode_amplitude(&self, n: usize) -> f64 {
        let (a, b) = self.fourier_mode(n);
        a.hypot(b)
    }

    /// L² − 4πA, nonnegative for every convex body and zero only for discs.
    pub fn isoperimetric_deficit(&self) -> f64 {
        self.length().powi(2) - 4.0 * PI * self.area()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("support function serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GcsfError::InvalidInput(e.to_string()))
    }

    /// Two-column CSV `theta,s` with round-trip decimal output.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,s\n");
        for (k, s) in self.samples.iter().enumerate() {
            writeln!(out, "{},{}", self.theta(k), s).unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let mut samples = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| GcsfError::InvalidInput(e.to_string()))?;
            let field = record
                .get(1)
                .ok_or_else(|| GcsfError::InvalidInput("missing column `s`".into()))?;
            samples.push(
                field
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| GcsfError::InvalidInput(format!("bad sample {field:?}: {e}")))?,
            );
        }
        SupportFunction::new(samples)
    }
}

pub(crate) fn check_convex(radius: &[f64]) -> Result<()> {
    match radius.iter().position(|r| !(*r > 0.0)) {
        Some(k) => Err(GcsfError::ConvexityLost(format!(
            "radius of curvature {} at node {k}",
            radius[k]
        ))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rejects_bad_grids_and_radii() {
        assert!(matches!(
            SupportFunction::circle(1.0, PlanePoint::ORIGIN, 63),
            Err(GcsfError::InvalidParameter(_))
        ));
        assert!(SupportFunction::circle(1.0, PlanePoint::ORIGIN, 62).is_err());
        assert!(SupportFunction::circle(0.0, PlanePoint::ORIGIN, 64).is_err());
        assert!(SupportFunction::circle(-1.0, PlanePoint::ORIGIN, 64).is_err());
        assert!(SupportFunction::ellipse(1.0, 0.0, 64).is_err());
    }

    #[test]
    fn rejects_nonconvex_samples() {
        // 1 + 0.2 cos 3θ has s'' + s = 1 − 1.6 cos 3θ < 0 somewhere.
        let err = SupportFunction::fourier(1.0, &[(3, 0.2, 0.0)], 128).unwrap_err();
        assert!(matches!(err, GcsfError::ConvexityLost(_)));
        let mut samples = vec![1.0; 64];
        samples[5] = f64::NAN;
        assert!(matches!(SupportFunction::new(samples), Err(GcsfError::InvalidParameter(_))));
    }

    #[test]
    fn unit_circle_is_constant() {
        let s = SupportFunction::circle(1.0, PlanePoint::ORIGIN, 128).unwrap();
        assert!(s.samples().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn circle_area_length_and_center() {
        let s = SupportFunction::circle(2.0, PlanePoint::ORIGIN, 128).unwrap();
        assert_abs_diff_eq!(s.area(), 4.0 * PI, epsilon = 1e-10);
        assert_abs_diff_eq!(s.length(), 4.0 * PI, epsilon = 1e-10);
        let c = SupportFunction::circle(1.0, PlanePoint::new(3.0, 0.0).unwrap(), 128).unwrap();
        let p = c.steiner_point();
        assert_abs_diff_eq!(p.x, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.y, 0.0, epsilon = 1e-12);
        let c = SupportFunction::circle(1.0, PlanePoint::new(0.3, -0.7).unwrap(), 128).unwrap();
        let p = c.steiner_point();
        assert_abs_diff_eq!(p.x, 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(p.y, -0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(c.area(), PI, epsilon = 1e-10);
        assert_abs_diff_eq!(c.length(), TAU, epsilon = 1e-10);
    }

    #[test]
    fn degenerate_ellipse_is_circle() {
        let e = SupportFunction::ellipse(1.0, 1.0, 128).unwrap();
        let c = SupportFunction::circle(1.0, PlanePoint::ORIGIN, 128).unwrap();
        for (a, b) in e.samples().iter().zip(c.samples()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
        let p = SupportFunction::ellipse(2.0, 1.0, 128).unwrap().steiner_point();
        assert!(p.norm() < 1e-12);
    }

    #[test]
    fn curvature_radius_of_circle() {
        let s = SupportFunction::circle(3.0, PlanePoint::new(0.5, 0.25).unwrap(), 128).unwrap();
        for r in s.curvature_radius().unwrap() {
            assert_abs_diff_eq!(r, 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn steiner_point_of_first_harmonic() {
        let s = SupportFunction::fourier(1.0, &[(1, 0.1, 0.0)], 128).unwrap();
        let p = s.steiner_point();
        assert_abs_diff_eq!(p.x, 0.1, epsilon = 1e-14);
        assert_abs_diff_eq!(p.y, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn hausdorff_examples() {
        let c = SupportFunction::circle(1.0, PlanePoint::ORIGIN, 128).unwrap();
        assert_eq!(c.hausdorff_to_circle(PlanePoint::ORIGIN, 1.0).unwrap(), 0.0);
        let eps = 0.01;
        let s = SupportFunction::fourier(1.0, &[(2, eps, 0.0)], 128).unwrap();
        assert_abs_diff_eq!(s.hausdorff_to_circle(PlanePoint::ORIGIN, 1.0).unwrap(), eps, epsilon = 1e-15);
        let e = SupportFunction::ellipse(1.1, 1.0, 256).unwrap();
        assert_abs_diff_eq!(e.hausdorff_to_circle(PlanePoint::ORIGIN, 1.05).unwrap(), 0.05, epsilon = 1e-10);
    }

    #[test]
    fn hausdorff_rejects_outside_center() {
        let c = SupportFunction::circle(1.0, PlanePoint::ORIGIN, 64).unwrap();
        let err = c.hausdorff_to_circle(PlanePoint::new(2.0, 0.0).unwrap(), 1.0).unwrap_err();
        assert!(matches!(err, GcsfError::InvalidParameter(_)));
    }

    #[test]
    fn inradius_and_circumradius_of_ellipse() {
        let e = SupportFunction::ellipse(2.0, 1.0, 256).unwrap().translate(PlanePoint { x: 5.0, y: -1.0 });
        assert_abs_diff_eq!(e.inradius(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.circumradius(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn json_and_csv_round_trip() {
        let s = SupportFunction::ellipse(1.7, 0.9, 64).unwrap().translate(PlanePoint { x: 0.1, y: 1.0 / 3.0 });
        let back = SupportFunction::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let back = SupportFunction::from_csv(&s.to_csv()).unwrap();
        assert_eq!(back, s);
        assert!(SupportFunction::from_json(r#"{"m": 64, "samples": [1.0]}"#).is_err());
    }
}
