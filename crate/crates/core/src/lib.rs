//! Boundary-corrected kernel estimation of distribution functions on a
//! compact interval.
//!
//! The crate provides the classical kernel distribution function estimator,
//! its boundary-modified version built on the boundary kernel families
//! [`BoundaryVariant::K1`], [`BoundaryVariant::K2`] and
//! [`BoundaryVariant::K3`], exact finite-sample bias/variance/MISE
//! computations against a known distribution, the MISE-optimal bandwidth,
//! and a Monte Carlo harness for integrated squared errors.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod boundary;
pub mod cli;
pub mod distributions;
pub mod error;
pub mod estimator;
pub mod kernel;
pub mod numerics;
pub mod simulation;

pub use analysis::{
    asymptotic_pointwise, asymptotic_terms, exact_bias, exact_integrated_errors, exact_mise,
    exact_moments, exact_mse_curve, exact_n_variance, exact_pointwise, exact_variance, mise_terms,
    IntegratedError, MiseTerms, PointwiseError,
};
pub use boundary::{BoundaryKernelFamily, BoundaryVariant, ConditionReport, LeftSection};
pub use distributions::{BetaMixture, Distribution, RandomStream, Uniform};
pub use error::{Error, Result};
pub use estimator::{
    boundary_cdf, classical_cdf, evaluate_grid, is_proper, EstimatorConfig, Sample,
};
pub use kernel::BaseKernel;
pub use simulation::{run_ise, summarize, BandwidthRule, EstimatorKind, SimConfig, SimResult};
