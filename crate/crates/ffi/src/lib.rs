//! C ABI over `gcsf`.
//!
//! Objects cross the boundary as opaque handles created by `gcsf_*_new`-style
//! constructors and released with the matching `*_free`. Every fallible call
//! returns a [`GcsfStatus`]; on failure the message is kept per thread and
//! can be copied out with [`gcsf_last_error_message`]. Panics are caught and
//! reported as `GCSF_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use gcsf::flow::{self, FlowParams, FlowTrace, StopReason};
use gcsf::soliton::{self, RadialProfile};
use gcsf::{GcsfError, PlanePoint, SupportFunction};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcsfStatus {
    Ok = 0,
    InvalidParameter = 1,
    ConvexityLost = 2,
    StepRejected = 3,
    InvalidInput = 4,
    InsufficientDomain = 5,
    SolverDiverged = 6,
    NullPointer = 7,
    Panic = 8,
}

/// Why a flow run ended.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcsfStopReason {
    Extinct = 0,
    ConvexityLost = 1,
    TimeLimit = 2,
}

/// Flow parameters, mirrored field for field.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcsfFlowParams {
    pub alpha: f64,
    pub sigma: f64,
    pub cfl: f64,
    pub stop_inradius: f64,
    pub m: usize,
    pub record_stride: usize,
}

impl From<GcsfFlowParams> for FlowParams {
    fn from(p: GcsfFlowParams) -> Self {
        FlowParams {
            alpha: p.alpha,
            sigma: p.sigma,
            cfl: p.cfl,
            stop_inradius: p.stop_inradius,
            m: p.m,
            record_stride: p.record_stride,
        }
    }
}

/// Opaque sampled support function.
pub struct GcsfSupport(SupportFunction);
/// Opaque record of one flow run.
pub struct GcsfTrace(FlowTrace);
/// Opaque radial profile (translator, blow-down or dual).
pub struct GcsfRadialProfile(RadialProfile);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

enum Failure {
    Core(GcsfError),
    Null(&'static str),
}

impl From<GcsfError> for Failure {
    fn from(e: GcsfError) -> Self {
        Failure::Core(e)
    }
}

type FfiResult = Result<(), Failure>;

fn status_of(e: &GcsfError) -> GcsfStatus {
    match e {
        GcsfError::InvalidParameter(_) => GcsfStatus::InvalidParameter,
        GcsfError::ConvexityLost(_) => GcsfStatus::ConvexityLost,
        GcsfError::StepRejected(_) => GcsfStatus::StepRejected,
        GcsfError::InvalidInput(_) => GcsfStatus::InvalidInput,
        GcsfError::InsufficientDomain(_) => GcsfStatus::InsufficientDomain,
        GcsfError::SolverDiverged(_) => GcsfStatus::SolverDiverged,
    }
}

fn guard(f: impl FnOnce() -> FfiResult) -> GcsfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            GcsfStatus::Ok
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            GcsfStatus::NullPointer
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            GcsfStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write<T>(p: *mut T, value: T, what: &'static str) -> FfiResult {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    p.write(value);
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len` bytes) and returns the full message length in bytes,
/// excluding the terminator. Passing a null `buf` only queries the length.
///
/// # Safety
/// `buf` must be null or point to at least `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn gcsf_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Default flow parameters (α = 1, 512 grid points).
#[no_mangle]
pub extern "C" fn gcsf_flow_params_default() -> GcsfFlowParams {
    let p = FlowParams::default();
    GcsfFlowParams {
        alpha: p.alpha,
        sigma: p.sigma,
        cfl: p.cfl,
        stop_inradius: p.stop_inradius,
        m: p.m,
        record_stride: p.record_stride,
    }
}

/// Circle of radius `radius` centred at (`cx`, `cy`) on an `m`-point grid.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn gcsf_support_circle(radius: f64, cx: f64, cy: f64, m: usize, out: *mut *mut GcsfSupport) -> GcsfStatus {
    guard(|| {
        let s = SupportFunction::circle(radius, PlanePoint::new(cx, cy)?, m)?;
        write(out, boxed(GcsfSupport(s)), "out")
    })
}

/// Centred ellipse with semi-axes `a` (along x) and `b`.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn gcsf_support_ellipse(a: f64, b: f64, m: usize, out: *mut *mut GcsfSupport) -> GcsfStatus {
    guard(|| write(out, boxed(GcsfSupport(SupportFunction::ellipse(a, b, m)?)), "out"))
}

/// Support function from `len` samples at θ_k = 2πk/len.
///
/// # Safety
/// `samples` must point to `len` readable doubles; `out` to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn gcsf_support_from_samples(samples: *const f64, len: usize, out: *mut *mut GcsfSupport) -> GcsfStatus {
    guard(|| {
        if samples.is_null() {
            return Err(Failure::Null("samples"));
        }
        let v = std::slice::from_raw_parts(samples, len).to_vec();
        write(out, boxed(GcsfSupport(SupportFunction::new(v)?)), "out")
    })
}

/// Number of grid samples, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gcsf_support_len(s: *const GcsfSupport) -> usize {
    s.as_ref().map_or(0, |s| s.0.m())
}

/// Copies the samples into `buf`, which must hold `gcsf_support_len(s)` values.
///
/// # Safety
/// `s` must be a live handle and `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn gcsf_support_samples(s: *const GcsfSupport, buf: *mut f64, len: usize) -> GcsfStatus {
    guard(|| {
        let s = borrow(s, "support")?;
        if buf.is_null() {
            return Err(Failure::Null("buf"));
        }
        if len < s.0.m() {
            return Err(GcsfError::InvalidInput(format!("buffer holds {len} values, need {}", s.0.m())).into());
        }
        std::ptr::copy_nonoverlapping(s.0.samples().as_ptr(), buf, s.0.m());
        Ok(())
    })
}

/// Enclosed area.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcsf_support_area(s: *const GcsfSupport, out: *mut f64) -> GcsfStatus {
    guard(|| write(out, borrow(s, "support")?.0.area(), "out"))
}

/// Perimeter.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcsf_support_length(s: *const GcsfSupport, out: *mut f64) -> GcsfStatus {
    guard(|| write(out, borrow(s, "support")?.0.length(), "out"))
}

/// Steiner point.
///
/// # Safety
/// `s` must be a live handle; `x` and `y` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gcsf_support_steiner(s: *const GcsfSupport, x: *mut f64, y: *mut f64) -> GcsfStatus {
    guard(|| {
        let p = borrow(s, "support")?.0.steiner_point();
        write(x, p.x, "x")?;
        write(y, p.y, "y")
    })
}

/// Hausdorff distance to the circle of radius `radius` about (`cx`, `cy`),
/// which must lie inside the body.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcsf_support_hausdorff_to_circle(
    s: *const GcsfSupport,
    cx: f64,
    cy: f64,
    radius: f64,
    out: *mut f64,
) -> GcsfStatus {
    guard(|| {
        let d = borrow(s, "support")?.0.hausdorff_to_circle(PlanePoint::new(cx, cy)?, radius)?;
        write(out, d, "out")
    })
}

/// Releases a support-function handle; null is ignored.
///
/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcsf_support_free(s: *mut GcsfSupport) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Runs the unnormalized flow from `s` until extinction, convexity loss or `t_max`.
///
/// # Safety
/// `s` and `params` must be valid; `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn gcsf_flow_run_to_extinction(
    s: *const GcsfSupport,
    params: *const GcsfFlowParams,
    t_max: f64,
    out: *mut *mut GcsfTrace,
) -> GcsfStatus {
    guard(|| {
        let p: FlowParams = (*borrow(params, "params")?).into();
        let trace = flow::run_to_extinction(&borrow(s, "support")?.0, &p, t_max)?;
        write(out, boxed(GcsfTrace(trace)), "out")
    })
}

/// Estimated extinction time; `GCSF_STATUS_INVALID_INPUT` if the run did not go extinct.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcsf_trace_extinction_time(t: *const GcsfTrace, out: *mut f64) -> GcsfStatus {
    guard(|| {
        let tr = &borrow(t, "trace")?.0;
        let te = tr
            .extinction_time
            .ok_or_else(|| GcsfError::InvalidInput(format!("run stopped with {}", tr.stop_reason.as_str())))?;
        write(out, te, "out")
    })
}

/// Why the run ended.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcsf_trace_stop_reason(t: *const GcsfTrace, out: *mut GcsfStopReason) -> GcsfStatus {
    guard(|| {
        let reason = match borrow(t, "trace")?.0.stop_reason {
            StopReason::Extinct => GcsfStopReason::Extinct,
            StopReason::ConvexityLost => GcsfStopReason::ConvexityLost,
            StopReason::TimeLimit => GcsfStopReason::TimeLimit,
        };
        write(out, reason, "out")
    })
}

/// Number of recorded states, or 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gcsf_trace_len(t: *const GcsfTrace) -> usize {
    t.as_ref().map_or(0, |t| t.0.len())
}

/// Time, area and inradius of recorded state `i`.
///
/// # Safety
/// `t` must be a live handle; the outputs valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gcsf_trace_sample(
    t: *const GcsfTrace,
    i: usize,
    time: *mut f64,
    area: *mut f64,
    inradius: *mut f64,
) -> GcsfStatus {
    guard(|| {
        let tr = &borrow(t, "trace")?.0;
        if i >= tr.len() {
            return Err(GcsfError::InvalidInput(format!("index {i} out of range for {} states", tr.len())).into());
        }
        write(time, tr.times[i], "time")?;
        write(area, tr.areas[i], "area")?;
        write(inradius, tr.inradii[i], "inradius")
    })
}

/// Releases a trace handle; null is ignored.
///
/// # Safety
/// `t` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcsf_trace_free(t: *mut GcsfTrace) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Growth rate 1 + α(1 − n²) of mode n of the normalized flow at the unit circle.
#[no_mangle]
pub extern "C" fn gcsf_linearized_mode_rate(alpha: f64, n: u32) -> f64 {
    flow::linearized_mode_rate(alpha, n)
}

/// Integrates the 1-D translator on [0, `x_max`]. `blows_up` is set when the
/// slope becomes infinite before `x_max`; `half_width` then holds that
/// abscissa, and otherwise the end of the integration range.
///
/// # Safety
/// `half_width` and `blows_up` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gcsf_translator_half_width(
    alpha: f64,
    x_max: f64,
    tol: f64,
    half_width: *mut f64,
    blows_up: *mut bool,
) -> GcsfStatus {
    guard(|| {
        let p = soliton::translator_1d(alpha, x_max, tol)?;
        write(half_width, p.domain_half_width.unwrap_or_else(|| p.x_end()), "half_width")?;
        write(blows_up, p.domain_half_width.is_some(), "blows_up")
    })
}

/// Radial translator of L_σ u = 1 on [0, `r_max`].
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn gcsf_radial_translator(
    alpha: f64,
    sigma: f64,
    r_max: f64,
    tol: f64,
    out: *mut *mut GcsfRadialProfile,
) -> GcsfStatus {
    guard(|| {
        let p = soliton::radial_translator(alpha, sigma, r_max, tol)?;
        write(out, boxed(GcsfRadialProfile(p)), "out")
    })
}

/// Number of nodes, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gcsf_radial_len(p: *const GcsfRadialProfile) -> usize {
    p.as_ref().map_or(0, |p| p.0.len())
}

/// Value and slope at radius `r` by cubic Hermite interpolation.
///
/// # Safety
/// `p` must be a live handle; `u` and `du` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gcsf_radial_eval(p: *const GcsfRadialProfile, r: f64, u: *mut f64, du: *mut f64) -> GcsfStatus {
    guard(|| {
        let (v, dv) = borrow(p, "profile")?.0.eval(r)?;
        write(u, v, "u")?;
        write(du, dv, "du")
    })
}

/// Blow-down u_h(ρ) = h^{−α/(1+α)} u(h^{1/(1+α)} ρ) and its sup distance to
/// the power cone on [0, 1].
///
/// # Safety
/// `p` must be a live handle; `sup_dist` a valid pointer; `rescaled` null or
/// a valid pointer to a handle slot that receives the rescaled profile.
#[no_mangle]
pub unsafe extern "C" fn gcsf_blow_down(
    p: *const GcsfRadialProfile,
    alpha: f64,
    h: f64,
    sup_dist: *mut f64,
    rescaled: *mut *mut GcsfRadialProfile,
) -> GcsfStatus {
    guard(|| {
        let (q, sup) = soliton::blow_down(&borrow(p, "profile")?.0, alpha, h)?;
        write(sup_dist, sup, "sup_dist")?;
        if !rescaled.is_null() {
            rescaled.write(boxed(GcsfRadialProfile(q)));
        }
        Ok(())
    })
}

/// Discrete Legendre dual of a profile with strictly increasing slope.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn gcsf_legendre(p: *const GcsfRadialProfile, out: *mut *mut GcsfRadialProfile) -> GcsfStatus {
    guard(|| {
        let dual = soliton::legendre(&borrow(p, "profile")?.0)?;
        write(out, boxed(GcsfRadialProfile(dual)), "out")
    })
}

/// Releases a profile handle; null is ignored.
///
/// # Safety
/// `p` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcsf_radial_free(p: *mut GcsfRadialProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// First time the comparison ODE reaches ρ' = 1; `GCSF_STATUS_INSUFFICIENT_DOMAIN`
/// if that does not happen before `t_max`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcsf_comparison_a_cross(alpha: f64, delta: f64, t_max: f64, tol: f64, out: *mut f64) -> GcsfStatus {
    guard(|| {
        let sol = soliton::comparison_ode(alpha, delta, t_max, tol)?;
        let a = sol
            .a_cross
            .ok_or_else(|| GcsfError::InsufficientDomain(format!("rho' stays below 1 up to t = {t_max}")))?;
        write(out, a, "out")
    })
}
