//! Exact bias and MSE of the MLE plug-in and UMVU estimators.
//!
//! Both estimators are functions of the sample sum `T`, whose density is the
//! gamma mixture in [`crate::distribution::SumDensity`]. For an estimator
//! `h(T)` of a target `τ(x; θ)`:
//!
//! ```text
//! E[h(T)]       = ∫ h(t) f(t; n, θ) dt
//! MSE           = ∫ (h(t) − τ)² f(t; n, θ) dt
//! ```
//!
//! The integrals run over `[0, t_max]`, where `t_max` puts less than
//! [`TAIL_MASS`] of the heaviest mixture component (Gamma(2n, θ)) beyond it.

use alloc::vec::Vec;

// Unused when std is linked into the build, e.g. by dev-dependencies.
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::curve::UmvueCoefficients;
use crate::distribution::{cdf_unchecked, pdf_unchecked, SumDensity, SumDensityParams};
use crate::estimators::g_unchecked;
use crate::quadrature::{integrate_with_breaks, Tolerance};
use crate::special::reg_upper_gamma;
use crate::{Error, LindleyParam, Result};

pub const TAIL_MASS: f64 = 1e-12;

/// Which function is being estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Pdf,
    Cdf,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Pdf => "pdf",
            Target::Cdf => "cdf",
        }
    }

    /// True value of the target at `x` under θ.
    pub fn evaluate(self, x: f64, theta: f64) -> f64 {
        match self {
            Target::Pdf => pdf_unchecked(x, theta),
            Target::Cdf => cdf_unchecked(x, theta),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RiskEstimator {
    #[serde(rename = "MLE_PLUGIN")]
    MlePlugin,
    #[serde(rename = "UMVUE")]
    Umvue,
}

impl RiskEstimator {
    pub fn name(self) -> &'static str {
        match self {
            RiskEstimator::MlePlugin => "MLE_PLUGIN",
            RiskEstimator::Umvue => "UMVUE",
        }
    }
}

/// How the MLE plug-in expectation is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RiskFormula {
    /// `∫ h(g(t)) f(t) dt`.
    #[default]
    Standard,
    /// `∫ h(g(t)) f(t) |g'(t)| dt`, the form with an extra change-of-variables
    /// factor. It does not integrate a probability density and is provided
    /// only to reproduce numbers computed that way.
    WithJacobian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskQuery {
    pub x: f64,
    pub theta: f64,
    pub n: usize,
    pub target: Target,
    pub estimator: RiskEstimator,
}

impl RiskQuery {
    fn validate(&self) -> Result<LindleyParam> {
        if !(self.x >= 0.0 && self.x.is_finite()) {
            return Err(Error::domain("risk evaluation point must be finite and >= 0", self.x));
        }
        let theta = LindleyParam::new(self.theta)?;
        let min_n = match self.estimator {
            RiskEstimator::MlePlugin => 1,
            RiskEstimator::Umvue => 2,
        };
        if self.n < min_n {
            return Err(Error::domain("sample size too small for this estimator", self.n as f64));
        }
        Ok(theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskResult {
    pub expectation: f64,
    pub bias: f64,
    pub mse: f64,
    pub quadrature_error_estimate: f64,
    pub truncation_point: f64,
}

/// `dg/dt` for `g(t) = [−(t−n) + √((t−n)² + 8tn)]/(2t)`:
/// `−n/(2t²) + (t+3n)/(2t√D) − √D/(2t²)` with `D = (t−n)² + 8tn`.
pub fn deriv_g(t: f64, n: usize) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain("deriv_g needs a positive finite t", t));
    }
    if n == 0 {
        return Err(Error::domain("deriv_g needs n >= 1", 0.0));
    }
    Ok(deriv_g_unchecked(t, n as f64))
}

fn deriv_g_unchecked(t: f64, n: f64) -> f64 {
    let d = t - n;
    let root = (d * d + 8.0 * t * n).sqrt();
    if d > 0.0 {
        // Derivative of the rationalized form 4n/(d + √D).
        let denom = d + root;
        -4.0 * n * (1.0 + (t + 3.0 * n) / root) / (denom * denom)
    } else {
        -n / (2.0 * t * t) + (t + 3.0 * n) / (2.0 * t * root) - root / (2.0 * t * t)
    }
}

/// Smallest `t` (up to bisection accuracy) with
/// `P(Gamma(2n, θ) > t) < TAIL_MASS`.
pub fn truncation_point(n: usize, theta: f64) -> Result<f64> {
    let shape = 2.0 * n as f64;
    let mut lo = 0.0;
    let mut hi = shape.max(1.0);
    while reg_upper_gamma(shape, hi)? >= TAIL_MASS {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if reg_upper_gamma(shape, mid)? >= TAIL_MASS {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi / theta)
}

struct Moments {
    expectation: f64,
    mse: f64,
    error: f64,
}

fn moments<H>(h: H, target: f64, density: &SumDensity, breaks: &[f64], jac: Option<f64>) -> Result<Moments>
where
    H: Fn(f64) -> f64,
{
    let tol = Tolerance::default();
    let n = density.params().n as f64;
    let weight = |t: f64| {
        let w = density.pdf(t);
        match jac {
            Some(_) => w * deriv_g_unchecked(t, n).abs(),
            None => w,
        }
    };
    let first = integrate_with_breaks(|t| h(t) * weight(t), breaks, tol)?;
    let second = integrate_with_breaks(
        |t| {
            let e = h(t) - target;
            e * e * weight(t)
        },
        breaks,
        tol,
    )?;
    Ok(Moments {
        expectation: first.value,
        mse: second.value.max(0.0),
        error: first.error + second.error,
    })
}

fn breaks_for(x: f64, t_max: f64) -> Vec<f64> {
    let mut b = alloc::vec![0.0];
    if x > 0.0 && x < t_max {
        b.push(x);
    }
    b.push(t_max);
    b
}

/// Bias and MSE of the MLE plug-in estimator of f(x) or F(x).
pub fn mle_risk(q: &RiskQuery) -> Result<RiskResult> {
    mle_risk_with(q, RiskFormula::Standard)
}

pub fn mle_risk_with(q: &RiskQuery, formula: RiskFormula) -> Result<RiskResult> {
    if q.estimator != RiskEstimator::MlePlugin {
        return Err(Error::domain("mle_risk needs the MLE_PLUGIN estimator", f64::NAN));
    }
    let theta = q.validate()?;
    let (x, n) = (q.x, q.n);
    let target = q.target.evaluate(x, theta.theta());
    let density = SumDensity::new(SumDensityParams::new(n, theta)?);
    let t_max = truncation_point(n, theta.theta())?;
    let nf = n as f64;
    let h = |t: f64| {
        if t <= 0.0 {
            // Only reached for t = 0 exactly, where the density weight is 0.
            return 0.0;
        }
        q.target.evaluate(x, g_unchecked(t, nf))
    };
    let jac = match formula {
        RiskFormula::Standard => None,
        RiskFormula::WithJacobian => Some(1.0),
    };
    let m = moments(h, target, &density, &[0.0, t_max], jac)?;
    Ok(RiskResult {
        expectation: m.expectation,
        bias: m.expectation - target,
        mse: m.mse,
        quadrature_error_estimate: m.error,
        truncation_point: t_max,
    })
}

/// Bias and MSE of the UMVU estimator of f(x) or F(x). For `T <= x` the
/// estimator is 0 (density) or 1 (distribution function).
pub fn umvue_risk(q: &RiskQuery) -> Result<RiskResult> {
    if q.estimator != RiskEstimator::Umvue {
        return Err(Error::domain("umvue_risk needs the UMVUE estimator", f64::NAN));
    }
    let theta = q.validate()?;
    let (x, n) = (q.x, q.n);
    let target = q.target.evaluate(x, theta.theta());
    let density = SumDensity::new(SumDensityParams::new(n, theta)?);
    let t_max = truncation_point(n, theta.theta())?;
    let coefs = UmvueCoefficients::new(n)?;
    let h = |t: f64| -> f64 {
        let Ok(ctx) = coefs.context(t) else {
            return 0.0;
        };
        match q.target {
            Target::Pdf => crate::curve::umvue_pdf(x, &ctx),
            Target::Cdf => crate::curve::umvue_cdf(x, &ctx).unwrap_or(f64::NAN),
        }
    };
    let m = moments(h, target, &density, &breaks_for(x, t_max), None)?;
    Ok(RiskResult {
        expectation: m.expectation,
        bias: m.expectation - target,
        mse: m.mse,
        quadrature_error_estimate: m.error,
        truncation_point: t_max,
    })
}

/// Dispatches on `q.estimator`.
pub fn risk(q: &RiskQuery) -> Result<RiskResult> {
    match q.estimator {
        RiskEstimator::MlePlugin => mle_risk(q),
        RiskEstimator::Umvue => umvue_risk(q),
    }
}
