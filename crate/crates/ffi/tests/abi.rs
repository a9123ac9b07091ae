use std::f64::consts::{FRAC_PI_2, PI};
use std::ffi::CStr;
use std::ptr;

use gcsf_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as std::ffi::c_char; 256];
    unsafe {
        gcsf_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn support_function_round_trip() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(gcsf_support_circle(2.0, 0.5, -1.0, 64, &mut s), GcsfStatus::Ok);
        assert_eq!(gcsf_support_len(s), 64);
        let (mut area, mut length, mut x, mut y) = (0.0, 0.0, 0.0, 0.0);
        assert_eq!(gcsf_support_area(s, &mut area), GcsfStatus::Ok);
        assert_eq!(gcsf_support_length(s, &mut length), GcsfStatus::Ok);
        assert_eq!(gcsf_support_steiner(s, &mut x, &mut y), GcsfStatus::Ok);
        assert!((area - 4.0 * PI).abs() < 1e-12);
        assert!((length - 4.0 * PI).abs() < 1e-12);
        assert!((x - 0.5).abs() < 1e-12 && (y + 1.0).abs() < 1e-12);

        let mut samples = vec![0.0; 64];
        assert_eq!(gcsf_support_samples(s, samples.as_mut_ptr(), samples.len()), GcsfStatus::Ok);
        let mut copy = ptr::null_mut();
        assert_eq!(gcsf_support_from_samples(samples.as_ptr(), samples.len(), &mut copy), GcsfStatus::Ok);
        let mut d = 1.0;
        assert_eq!(gcsf_support_hausdorff_to_circle(copy, 0.5, -1.0, 2.0, &mut d), GcsfStatus::Ok);
        assert!(d < 1e-12);

        let mut short = vec![0.0; 10];
        assert_eq!(gcsf_support_samples(s, short.as_mut_ptr(), short.len()), GcsfStatus::InvalidInput);
        gcsf_support_free(s);
        gcsf_support_free(copy);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(gcsf_support_circle(-1.0, 0.0, 0.0, 64, &mut s), GcsfStatus::InvalidParameter);
        assert!(s.is_null());
        assert!(last_error().contains("invalid parameter"), "{}", last_error());
        assert_eq!(gcsf_support_ellipse(1.0, 1.0, 64, ptr::null_mut()), GcsfStatus::NullPointer);
        assert!(last_error().contains("out"));
        assert_eq!(gcsf_support_area(ptr::null(), &mut 0.0), GcsfStatus::NullPointer);
        let mut a = 0.0;
        assert_eq!(gcsf_comparison_a_cross(1.0, 1e-3, 0.01, 1e-10, &mut a), GcsfStatus::InsufficientDomain);
        // A successful call clears the message.
        assert_eq!(gcsf_support_ellipse(1.0, 1.0, 64, &mut s), GcsfStatus::Ok);
        assert_eq!(gcsf_last_error_message(ptr::null_mut(), 0), 0);
        gcsf_support_free(s);
        gcsf_support_free(ptr::null_mut());
    }
}

#[test]
fn error_message_truncates() {
    unsafe {
        gcsf_support_circle(-1.0, 0.0, 0.0, 64, &mut ptr::null_mut());
        let full = gcsf_last_error_message(ptr::null_mut(), 0);
        let mut buf = [1 as std::ffi::c_char; 8];
        assert_eq!(gcsf_last_error_message(buf.as_mut_ptr(), buf.len()), full);
        assert_eq!(CStr::from_ptr(buf.as_ptr()).to_bytes().len(), 7);
    }
}

#[test]
fn flow_to_extinction() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(gcsf_support_circle(1.0, 0.0, 0.0, 64, &mut s), GcsfStatus::Ok);
        let mut params = gcsf_flow_params_default();
        params.m = 64;
        let mut trace = ptr::null_mut();
        assert_eq!(gcsf_flow_run_to_extinction(s, &params, 10.0, &mut trace), GcsfStatus::Ok);
        let mut te = 0.0;
        assert_eq!(gcsf_trace_extinction_time(trace, &mut te), GcsfStatus::Ok);
        assert!((te - 0.5).abs() < 1e-4, "{te}");
        let mut reason = GcsfStopReason::TimeLimit;
        assert_eq!(gcsf_trace_stop_reason(trace, &mut reason), GcsfStatus::Ok);
        assert_eq!(reason, GcsfStopReason::Extinct);
        let n = gcsf_trace_len(trace);
        assert!(n > 2);
        let (mut t, mut a, mut r) = (0.0, 0.0, 0.0);
        assert_eq!(gcsf_trace_sample(trace, 0, &mut t, &mut a, &mut r), GcsfStatus::Ok);
        assert_eq!(t, 0.0);
        assert!((r - 1.0).abs() < 1e-12);
        assert_eq!(gcsf_trace_sample(trace, n, &mut t, &mut a, &mut r), GcsfStatus::InvalidInput);

        params.alpha = -1.0;
        let mut bad = ptr::null_mut();
        assert_eq!(gcsf_flow_run_to_extinction(s, &params, 10.0, &mut bad), GcsfStatus::InvalidParameter);
        gcsf_trace_free(trace);
        gcsf_support_free(s);
    }
    assert_eq!(gcsf_linearized_mode_rate(1.0, 2), -2.0);
}

#[test]
fn solitons() {
    unsafe {
        let (mut w, mut blows) = (0.0, false);
        assert_eq!(gcsf_translator_half_width(1.0, 20.0, 1e-10, &mut w, &mut blows), GcsfStatus::Ok);
        assert!(blows && (w - FRAC_PI_2).abs() < 1e-6);
        assert_eq!(gcsf_translator_half_width(0.4, 20.0, 1e-10, &mut w, &mut blows), GcsfStatus::Ok);
        assert!(!blows && w >= 20.0);

        let mut p = ptr::null_mut();
        assert_eq!(gcsf_radial_translator(1.0, 1.0, 101.0, 1e-10, &mut p), GcsfStatus::Ok);
        assert!(gcsf_radial_len(p) > 100);
        let (mut u, mut du) = (0.0, 0.0);
        assert_eq!(gcsf_radial_eval(p, 1.0, &mut u, &mut du), GcsfStatus::Ok);
        assert!(u > 0.0 && du > 0.0);
        assert_eq!(gcsf_radial_eval(p, 500.0, &mut u, &mut du), GcsfStatus::InsufficientDomain);

        let mut sups = Vec::new();
        for h in [10.0, 100.0, 1000.0, 10000.0] {
            let mut sup = 0.0;
            let mut rescaled = ptr::null_mut();
            assert_eq!(gcsf_blow_down(p, 1.0, h, &mut sup, &mut rescaled), GcsfStatus::Ok);
            assert!(!rescaled.is_null());
            gcsf_radial_free(rescaled);
            sups.push(sup);
        }
        assert!(sups.windows(2).all(|w| w[1] < w[0]));
        let mut sup = 0.0;
        assert_eq!(gcsf_blow_down(p, 1.0, 1e8, &mut sup, ptr::null_mut()), GcsfStatus::InsufficientDomain);

        let mut dual = ptr::null_mut();
        assert_eq!(gcsf_legendre(p, &mut dual), GcsfStatus::Ok);
        assert!(gcsf_radial_len(dual) > 0);
        gcsf_radial_free(dual);
        gcsf_radial_free(p);

        let mut a = 0.0;
        assert_eq!(gcsf_comparison_a_cross(1.0, 1e-6, 20.0, 1e-10, &mut a), GcsfStatus::Ok);
        assert!(a > 0.0 && a < 20.0);
    }
}

#[test]
fn generated_header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/gcsf.h")).unwrap();
    for name in [
        "GCSF_STATUS_OK",
        "typedef struct GcsfSupport GcsfSupport",
        "gcsf_support_circle",
        "gcsf_flow_run_to_extinction",
        "gcsf_blow_down",
        "gcsf_comparison_a_cross",
        "gcsf_last_error_message",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let header_dir = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(
        &src,
        "#include \"gcsf.h\"\nint main(void) { GcsfSupport *s = 0; double a; \
         GcsfStatus st = gcsf_support_circle(1.0, 0.0, 0.0, 64, &s); \
         st = gcsf_support_area(s, &a); gcsf_support_free(s); return (int)st; }\n",
    )
    .unwrap();
    let Ok(out) = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", header_dir])
        .arg(&src)
        .output()
    else {
        eprintln!("no C compiler on PATH; skipping");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
