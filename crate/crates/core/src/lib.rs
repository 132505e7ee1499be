//! Certified two-sided enclosures for weighted integrals and convexity gaps
//! of convex functions on a compact interval.
//!
//! The crate is organised bottom-up:
//!
//! - [`types`]: intervals, curvature bounds, enclosures, weights.
//! - [`expr`]: a small expression language with symbolic derivatives.
//! - [`quadrature`]: the adaptive Simpson oracle used to check every bound.
//! - [`bounds`]: Hermite–Hadamard and Fejér type enclosures.
//! - [`means`]: special means and the Young-inequality refinements.
//! - [`verify`]: a seeded falsification harness.
//! - [`cli`]: the `fejer` command-line front end.

// `!(x >= y)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod expr;
pub mod means;
pub mod quadrature;
pub mod types;
pub mod verify;

pub use error::{Error, Result};
pub use expr::{Expr, FunctionSpec};
pub use types::{
    enclosure_contains, make_interval, CurvatureBounds, Enclosure, Interval, Lambda, Monotonicity,
    NodeWeights, Provenance, Rule, WeightSpec,
};
