//! Estimators of the density and distribution function of the one-parameter
//! Lindley distribution.
//!
//! The crate is `no_std` (it needs `alloc`) and carries everything that is
//! pure computation:
//!
//! - [`special`]: log-gamma, regularized incomplete beta and gamma functions.
//! - [`distribution`]: the Lindley law itself, its sampler and the exact
//!   density of the sample sum.
//! - [`optimize`] and [`quadrature`]: deterministic scalar minimization,
//!   root finding and adaptive Gauss–Kronrod integration.
//! - [`estimators`]: point estimators of θ (MLE plus five minimum-distance
//!   fits).
//! - [`curve`]: plug-in and UMVU estimators of f(x) and F(x).
//! - [`risk`]: exact bias and MSE of the MLE plug-in and UMVU estimators.
//! - [`simulation`]: the Monte Carlo comparison study.
//!
//! Floating-point elementary functions come from `libm`, so results are the
//! same whether or not the caller links `std`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod curve;
pub mod distribution;
mod error;
pub mod estimators;
pub mod optimize;
pub mod quadrature;
pub mod risk;
pub mod rng;
mod sample;
pub mod simulation;
pub mod special;

pub use curve::{
    plugin_cdf, plugin_pdf, umvue_cdf, umvue_pdf, EstimatedCurvePoint, FittedCurve, UmvueCoefficients,
    UmvueContext,
};
pub use distribution::{LindleyParam, SumDensityParams};
pub use error::{Error, Result};
pub use estimators::{EstimatorKind, ThetaEstimate};
pub use risk::{RiskEstimator, RiskQuery, RiskResult, Target};
pub use sample::Sample;
pub use simulation::{MseReport, SimConfig};
