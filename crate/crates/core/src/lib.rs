//! Numerical laboratory for the power-of-curvature flow κ^α of convex plane
//! curves and the translating solitons of the associated graph equation.
//!
//! * [`geometry`]: support-function representation and static quantities.
//! * [`flow`]: the unnormalized and normalized flows, extinction, rescaling,
//!   linearized spectrum and decay-rate fitting.
//! * [`soliton`]: translator ODEs, the L_σ operator, blow-down, Legendre
//!   transform, the comparison ODE and the radial log-convexity check.
//! * [`lab`]: experiment configuration, runs, sweeps and verification.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod flow;
pub mod geometry;
pub mod lab;
pub mod ode;
pub mod quad;
pub mod soliton;
pub mod spectral;
pub mod table;

pub use error::{GcsfError, Result};
pub use geometry::{PlanePoint, SupportFunction};
