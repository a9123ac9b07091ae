use std::f64::consts::{PI, TAU};

use gcsf::flow::{jensen_bound_check, FlowParams};
use gcsf::quad;
use gcsf::{GcsfError, PlanePoint, SupportFunction};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pt(x: f64, y: f64) -> PlanePoint {
    PlanePoint::new(x, y).unwrap()
}

/// Analytic support function of the (a, b) ellipse.
fn ellipse_s(a: f64, b: f64, t: f64) -> f64 {
    (a * a * t.cos().powi(2) + b * b * t.sin().powi(2)).sqrt()
}

#[test]
fn ellipse_curvature_radius_extremes() {
    let s = SupportFunction::ellipse(2.0, 1.0, 256).unwrap();
    let r = s.curvature_radius().unwrap();
    assert!((r[0] - 0.5).abs() < 1e-6);
    assert!((r[64] - 4.0).abs() < 1e-6);
    let min = r.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = r.iter().cloned().fold(0.0, f64::max);
    assert!((min - 0.5).abs() < 1e-6 && (max - 4.0).abs() < 1e-6);
}

#[test]
fn curvature_radius_matches_finite_differences() {
    let s = SupportFunction::ellipse(2.0, 1.0, 256).unwrap();
    let r = s.curvature_radius().unwrap();
    let h = 1e-4;
    for k in (0..256).step_by(7) {
        let t = s.theta(k);
        let d2 = (ellipse_s(2.0, 1.0, t + h) - 2.0 * ellipse_s(2.0, 1.0, t) + ellipse_s(2.0, 1.0, t - h)) / (h * h);
        let fd = d2 + ellipse_s(2.0, 1.0, t);
        assert!((r[k] - fd).abs() < 1e-5 * fd, "node {k}: {} vs {fd}", r[k]);
    }
}

#[test]
fn ellipse_area_and_length() {
    let s = SupportFunction::ellipse(3.0, 1.0, 256).unwrap();
    assert!((s.area() - 3.0 * PI).abs() < 1e-8);
    // Arc length of (3 cos t, sin t) by adaptive quadrature.
    let oracle = quad::integrate(|t| (9.0 * t.sin().powi(2) + t.cos().powi(2)).sqrt(), 0.0, TAU, 1e-13);
    assert!((s.length() - oracle).abs() < 1e-8, "{} vs {oracle}", s.length());
    let e = SupportFunction::ellipse(2.0, 1.0, 256).unwrap();
    assert!((e.area() - 2.0 * PI).abs() < 1e-10);
}

#[test]
fn circle_quantities_are_spectrally_accurate() {
    // Every grid reproduces the circle to round-off; the (5, 1) ellipse shows
    // the faster-than-polynomial decay of the area error.
    for m in [64, 128, 256] {
        let c = SupportFunction::circle(1.3, pt(0.2, -0.4), m).unwrap();
        assert!((c.area() - PI * 1.69).abs() < 1e-12);
        assert!((c.length() - TAU * 1.3).abs() < 1e-12);
    }
    let errs: Vec<f64> = [64, 128, 256]
        .iter()
        .map(|m| (SupportFunction::ellipse(5.0, 1.0, *m).unwrap().area() - 5.0 * PI).abs())
        .collect();
    assert!(errs[0] > 1e-6, "{errs:?}");
    assert!(errs[1] < errs[0] * 1e-3 && errs[2] < 1e-10, "{errs:?}");
}

#[test]
fn hausdorff_to_best_fit_circle_of_ellipse() {
    let s = SupportFunction::ellipse(1.1, 1.0, 256).unwrap();
    let oracle = (0..100_001)
        .map(|i| (ellipse_s(1.1, 1.0, TAU * i as f64 / 100_000.0) - 1.05).abs())
        .fold(0.0, f64::max);
    let d = s.hausdorff_to_circle(PlanePoint::ORIGIN, 1.05).unwrap();
    assert!((d - 0.05).abs() < 1e-10 && (d - oracle).abs() < 1e-10);
}

#[test]
fn invalid_constructors() {
    assert!(matches!(SupportFunction::circle(0.0, PlanePoint::ORIGIN, 64), Err(GcsfError::InvalidParameter(_))));
    assert!(matches!(SupportFunction::circle(1.0, PlanePoint::ORIGIN, 66 - 1), Err(GcsfError::InvalidParameter(_))));
    assert!(matches!(SupportFunction::ellipse(-1.0, 1.0, 64), Err(GcsfError::InvalidParameter(_))));
    assert!(matches!(
        SupportFunction::fourier(1.0, &[(2, 0.5, 0.0)], 64),
        Err(GcsfError::ConvexityLost(_))
    ));
}

#[test]
fn hundred_random_bodies_satisfy_isoperimetric_and_jensen() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let s = SupportFunction::random_convex(&mut rng, 8, 0.2, 128).unwrap();
        let s = s.translate(pt(0.01 * i as f64, -0.02 * i as f64));
        assert!(s.isoperimetric_deficit() > 1e-10, "body {i}");
        for alpha in [1.0, 1.5, 3.0] {
            let (lhs, rhs) = jensen_bound_check(&s, &FlowParams::with_alpha(alpha)).unwrap();
            assert!(lhs >= rhs * (1.0 - 1e-12), "body {i} alpha {alpha}: {lhs} < {rhs}");
        }
    }
}

#[test]
fn random_bodies_are_reproducible() {
    let draw = |seed| SupportFunction::random_convex(&mut ChaCha8Rng::seed_from_u64(seed), 6, 0.3, 64).unwrap();
    assert_eq!(draw(3), draw(3));
    assert_ne!(draw(3), draw(4));
}

fn body() -> impl Strategy<Value = SupportFunction> {
    (any::<u64>(), -2.0f64..2.0, -2.0f64..2.0, 0.2f64..3.0)
        .prop_map(|(seed, x, y, scale)| {
            SupportFunction::random_convex(&mut ChaCha8Rng::seed_from_u64(seed), 10, 0.25, 128)
                .unwrap()
                .scale(scale)
                .unwrap()
                .translate(pt(x, y))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructed_bodies_are_convex(s in body()) {
        prop_assert!(s.curvature_radius().unwrap().iter().all(|r| *r > 0.0));
    }

    #[test]
    fn isoperimetric_inequality(s in body()) {
        prop_assert!(s.length().powi(2) >= 4.0 * PI * s.area());
    }

    #[test]
    fn recenter_is_idempotent(s in body()) {
        let c = s.recenter();
        let (a1, b1) = c.fourier_mode(1);
        prop_assert!(a1.abs() < 1e-12 && b1.abs() < 1e-12);
        let cc = c.recenter();
        for (x, y) in c.samples().iter().zip(cc.samples()) {
            prop_assert!((x - y).abs() <= 1e-13 * x.abs().max(1.0));
        }
    }

    #[test]
    fn hausdorff_is_translation_invariant(s in body(), vx in -1.0f64..1.0, vy in -1.0f64..1.0, radius in 0.5f64..2.0) {
        let center = s.steiner_point();
        let v = pt(vx, vy);
        let d0 = s.hausdorff_to_circle(center, radius).unwrap();
        let d1 = s.translate(v).hausdorff_to_circle(center + v, radius).unwrap();
        prop_assert!((d0 - d1).abs() <= 1e-12 * d0.max(1.0));
    }

    #[test]
    fn circles_attain_isoperimetric_equality(r in 0.1f64..5.0, x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let c = SupportFunction::circle(r, pt(x, y), 128).unwrap();
        prop_assert!(c.isoperimetric_deficit().abs() <= 1e-10 * r * r);
        let sp = c.steiner_point();
        prop_assert!((sp.x - x).abs() < 1e-12 && (sp.y - y).abs() < 1e-12);
    }

    #[test]
    fn json_and_csv_are_bit_faithful(s in body()) {
        prop_assert_eq!(SupportFunction::from_json(&s.to_json()).unwrap(), s.clone());
        prop_assert_eq!(SupportFunction::from_csv(&s.to_csv()).unwrap(), s);
    }
}
