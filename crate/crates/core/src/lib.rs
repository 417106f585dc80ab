//! Closed-form fitting of a single Gaussian function
//! `y(x) = A exp(-(x - mu)^2 / (2 sigma^2))` to noisy samples.
//!
//! Five estimators are provided:
//!
//! * [`fit_caruana`]: unweighted least squares on `ln y`.
//! * [`fit_guo`]: `y^2`-weighted least squares on `ln y`, optionally reweighted
//!   with the fitted curve.
//! * [`fit_roonizi`]: linear regression of `y` on cumulative integrals of
//!   `x y` and `y`.
//! * [`fit_fas`]: width taken directly from the area under the samples
//!   ([`estimate_sigma_fas`]), then a two-unknown weighted fit for amplitude
//!   and mean, optionally iterated.
//!
//! Alongside the fitters the crate has an analytical error predictor for the
//! area-based width ([`errmodel`]), closed-form operation counts
//! ([`complexity`]), a Monte Carlo accuracy harness ([`bench`]) and CSV/JSON
//! serialization ([`io`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod complexity;
pub mod errmodel;
mod error;
pub mod fitters;
pub mod io;
pub mod linalg;
pub mod model;

pub use error::{Error, Result};
pub use fitters::{
    estimate_sigma_fas, fit, fit_caruana, fit_fas, fit_guo, fit_roonizi, params_from_quadratic,
    Algorithm, FitResult, IterationPolicy, QuadraticCoeffs, RooniziCoeffs,
};
pub use model::{evaluate, synthesize, synthesize_on_grid, Dataset, GaussianParams, Scenario};
