//! Translating solitons of the κ^α flow and the quantities built on them:
//! the 1-D translator and its strip/entire dichotomy, the radial translator
//! of L_σ u = 1, operator residuals, blow-down toward the power cone,
//! Legendre duals, the comparison ODE and radial log-convexity.

mod blowdown;
mod comparison;
mod legendre;
mod logconvex;
mod radial;
mod translator;

pub use blowdown::{blow_down, BLOWDOWN_NODES};
pub use comparison::{
    closed_form_defect, comparison_closed_form, comparison_ode, nodal_defect, summarize, ComparisonSummary, OdeSolution,
};
pub use legendre::{fit_power_law, involution_defect, legendre, PowerFit};
pub use logconvex::{log_convexity_samples, radial_log_convexity, LogConvexity, LOG_CONVEXITY_NODES};
pub use radial::{
    growth_bound_check, l0_vs_lsigma, l_sigma_integral_residual, l_sigma_residual, origin_series, radial_second_derivative, radial_translator,
    radial_translator_with, ProfileHeader, RadialOptions, RadialProfile, DEFAULT_SPACING, SERIES_RADIUS,
};
pub(crate) use radial::hermite;
pub use translator::{
    distance_to_blow_up, translator_1d, translator_1d_with, translator_gamma, translator_half_width_exact, Profile1D, SLOPE_SWITCH,
};
