//! Curvature and Einstein-equation verification for warped-product metrics.
//!
//! The crate is layered bottom-up:
//!
//! - [`expr`] parses metric and warping expressions and evaluates them with
//!   exact first and second derivatives.
//! - [`chart`] computes Christoffel symbols, Riemann/Ricci/scalar curvature,
//!   the Einstein tensor and the Hessian/Laplacian of scalar fields by direct
//!   coordinate differentiation. It is the reference every closed form is
//!   checked against.
//! - [`warped`] assembles `g + f²h` and evaluates the closed-form warped
//!   curvature, the cosmological-constant conditions and the fiber Einstein
//!   condition.
//! - [`grw`] specialises to generalized Robertson-Walker spacetimes.
//! - [`verify`] runs residual, oracle and constancy checks over seeded
//!   sample plans.

// Validation is written `!(x > 0.0)` on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chart;
pub mod error;
pub mod expr;
pub mod fuzz;
pub mod grw;
pub mod sampling;
pub mod verify;
pub mod warped;

pub use chart::{CurvatureBundle, FieldCalculus, MetricChart, ScalarField};
pub use error::{Error, Result};
pub use expr::{Expression, Jet2};
pub use sampling::SamplePlan;
pub use warped::{WarpedCurvature, WarpedProduct};
