#ifndef GCSF_H
#define GCSF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum GcsfStatus {
  GCSF_STATUS_OK = 0,
  GCSF_STATUS_INVALID_PARAMETER = 1,
  GCSF_STATUS_CONVEXITY_LOST = 2,
  GCSF_STATUS_STEP_REJECTED = 3,
  GCSF_STATUS_INVALID_INPUT = 4,
  GCSF_STATUS_INSUFFICIENT_DOMAIN = 5,
  GCSF_STATUS_SOLVER_DIVERGED = 6,
  GCSF_STATUS_NULL_POINTER = 7,
  GCSF_STATUS_PANIC = 8,
} GcsfStatus;

/**
 * Why a flow run ended.
 */
typedef enum GcsfStopReason {
  GCSF_STOP_REASON_EXTINCT = 0,
  GCSF_STOP_REASON_CONVEXITY_LOST = 1,
  GCSF_STOP_REASON_TIME_LIMIT = 2,
} GcsfStopReason;

/**
 * Opaque radial profile (translator, blow-down or dual).
 */
typedef struct GcsfRadialProfile GcsfRadialProfile;

/**
 * Opaque sampled support function.
 */
typedef struct GcsfSupport GcsfSupport;

/**
 * Opaque record of one flow run.
 */
typedef struct GcsfTrace GcsfTrace;

/**
 * Flow parameters, mirrored field for field.
 */
typedef struct GcsfFlowParams {
  double alpha;
  double sigma;
  double cfl;
  double stop_inradius;
  size_t m;
  size_t record_stride;
} GcsfFlowParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf` (NUL-terminated,
 * truncated to `len` bytes) and returns the full message length in bytes,
 * excluding the terminator. Passing a null `buf` only queries the length.
 *
 * # Safety
 * `buf` must be null or point to at least `len` writable bytes.
 */
size_t gcsf_last_error_message(char *buf, size_t len);

/**
 * Default flow parameters (α = 1, 512 grid points).
 */
struct GcsfFlowParams gcsf_flow_params_default(void);

/**
 * Circle of radius `radius` centred at (`cx`, `cy`) on an `m`-point grid.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum GcsfStatus gcsf_support_circle(double radius,
                                    double cx,
                                    double cy,
                                    size_t m,
                                    struct GcsfSupport **out);

/**
 * Centred ellipse with semi-axes `a` (along x) and `b`.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum GcsfStatus gcsf_support_ellipse(double a, double b, size_t m, struct GcsfSupport **out);

/**
 * Support function from `len` samples at θ_k = 2πk/len.
 *
 * # Safety
 * `samples` must point to `len` readable doubles; `out` to a handle slot.
 */
enum GcsfStatus gcsf_support_from_samples(const double *samples,
                                          size_t len,
                                          struct GcsfSupport **out);

/**
 * Number of grid samples, or 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t gcsf_support_len(const struct GcsfSupport *s);

/**
 * Copies the samples into `buf`, which must hold `gcsf_support_len(s)` values.
 *
 * # Safety
 * `s` must be a live handle and `buf` must point to `len` writable doubles.
 */
enum GcsfStatus gcsf_support_samples(const struct GcsfSupport *s, double *buf, size_t len);

/**
 * Enclosed area.
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum GcsfStatus gcsf_support_area(const struct GcsfSupport *s, double *out);

/**
 * Perimeter.
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum GcsfStatus gcsf_support_length(const struct GcsfSupport *s, double *out);

/**
 * Steiner point.
 *
 * # Safety
 * `s` must be a live handle; `x` and `y` valid pointers.
 */
enum GcsfStatus gcsf_support_steiner(const struct GcsfSupport *s, double *x, double *y);

/**
 * Hausdorff distance to the circle of radius `radius` about (`cx`, `cy`),
 * which must lie inside the body.
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum GcsfStatus gcsf_support_hausdorff_to_circle(const struct GcsfSupport *s,
                                                 double cx,
                                                 double cy,
                                                 double radius,
                                                 double *out);

/**
 * Releases a support-function handle; null is ignored.
 *
 * # Safety
 * `s` must be null or a handle not yet freed.
 */
void gcsf_support_free(struct GcsfSupport *s);

/**
 * Runs the unnormalized flow from `s` until extinction, convexity loss or `t_max`.
 *
 * # Safety
 * `s` and `params` must be valid; `out` must be a valid pointer to a handle slot.
 */
enum GcsfStatus gcsf_flow_run_to_extinction(const struct GcsfSupport *s,
                                            const struct GcsfFlowParams *params,
                                            double t_max,
                                            struct GcsfTrace **out);

/**
 * Estimated extinction time; `GCSF_STATUS_INVALID_INPUT` if the run did not go extinct.
 *
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
enum GcsfStatus gcsf_trace_extinction_time(const struct GcsfTrace *t, double *out);

/**
 * Why the run ended.
 *
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
enum GcsfStatus gcsf_trace_stop_reason(const struct GcsfTrace *t, enum GcsfStopReason *out);

/**
 * Number of recorded states, or 0 for a null handle.
 *
 * # Safety
 * `t` must be null or a live handle.
 */
size_t gcsf_trace_len(const struct GcsfTrace *t);

/**
 * Time, area and inradius of recorded state `i`.
 *
 * # Safety
 * `t` must be a live handle; the outputs valid pointers.
 */
enum GcsfStatus gcsf_trace_sample(const struct GcsfTrace *t,
                                  size_t i,
                                  double *time,
                                  double *area,
                                  double *inradius);

/**
 * Releases a trace handle; null is ignored.
 *
 * # Safety
 * `t` must be null or a handle not yet freed.
 */
void gcsf_trace_free(struct GcsfTrace *t);

/**
 * Growth rate 1 + α(1 − n²) of mode n of the normalized flow at the unit circle.
 */
double gcsf_linearized_mode_rate(double alpha, uint32_t n);

/**
 * Integrates the 1-D translator on [0, `x_max`]. `blows_up` is set when the
 * slope becomes infinite before `x_max`; `half_width` then holds that
 * abscissa, and otherwise the end of the integration range.
 *
 * # Safety
 * `half_width` and `blows_up` must be valid pointers.
 */
enum GcsfStatus gcsf_translator_half_width(double alpha,
                                           double x_max,
                                           double tol,
                                           double *half_width,
                                           bool *blows_up);

/**
 * Radial translator of L_σ u = 1 on [0, `r_max`].
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum GcsfStatus gcsf_radial_translator(double alpha,
                                       double sigma,
                                       double r_max,
                                       double tol,
                                       struct GcsfRadialProfile **out);

/**
 * Number of nodes, or 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t gcsf_radial_len(const struct GcsfRadialProfile *p);

/**
 * Value and slope at radius `r` by cubic Hermite interpolation.
 *
 * # Safety
 * `p` must be a live handle; `u` and `du` valid pointers.
 */
enum GcsfStatus gcsf_radial_eval(const struct GcsfRadialProfile *p,
                                 double r,
                                 double *u,
                                 double *du);

/**
 * Blow-down u_h(ρ) = h^{−α/(1+α)} u(h^{1/(1+α)} ρ) and its sup distance to
 * the power cone on [0, 1].
 *
 * # Safety
 * `p` must be a live handle; `sup_dist` a valid pointer; `rescaled` null or
 * a valid pointer to a handle slot that receives the rescaled profile.
 */
enum GcsfStatus gcsf_blow_down(const struct GcsfRadialProfile *p,
                               double alpha,
                               double h,
                               double *sup_dist,
                               struct GcsfRadialProfile **rescaled);

/**
 * Discrete Legendre dual of a profile with strictly increasing slope.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer to a handle slot.
 */
enum GcsfStatus gcsf_legendre(const struct GcsfRadialProfile *p, struct GcsfRadialProfile **out);

/**
 * Releases a profile handle; null is ignored.
 *
 * # Safety
 * `p` must be null or a handle not yet freed.
 */
void gcsf_radial_free(struct GcsfRadialProfile *p);

/**
 * First time the comparison ODE reaches ρ' = 1; `GCSF_STATUS_INSUFFICIENT_DOMAIN`
 * if that does not happen before `t_max`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum GcsfStatus gcsf_comparison_a_cross(double alpha,
                                        double delta,
                                        double t_max,
                                        double tol,
                                        double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GCSF_H */
