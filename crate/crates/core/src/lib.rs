//! Bounds on restricted isometry constants of scaled Gaussian matrices.
//!
//! The crate evaluates lower and upper bounds on the one-sided RIP constants
//! `delta_s^+` and `delta_s^-` of `A / sqrt(n)`, the chi-squared tail
//! quantities they are built from, and the concentration of top-k order
//! statistics behind them. Monte Carlo and brute-force tools check the
//! bounds on concrete matrices.
//!
//! Modules:
//! - [`chi2`]: survival, quantile and conditional tail mean of chi2(1).
//! - [`order_stats`]: top-k root-mean statistics and concentration bounds.
//! - [`rip_bounds`]: the bound formulas, measurement scans and curves.
//! - [`mc_lab`]: seeded ensembles, adversarial certificates, exact enumeration.
//! - [`io`]: CSV, SVG and run-manifest output.

// `!(x > 0.0)` style guards deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chi2;
pub mod error;
pub mod io;
pub mod mc_lab;
pub mod order_stats;
pub mod rip_bounds;
pub mod rng;

pub use chi2::{ConditionalMoment, TailSpec};
pub use error::{Error, Result};
pub use mc_lab::{DenseMatrix, Ensemble, ExactRip};
pub use order_stats::{ConcentrationBound, OrderStatReport, TopKSum};
pub use rip_bounds::{BoundKind, BoundReport, CurveRow, ProblemDims};

/// Version string recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
