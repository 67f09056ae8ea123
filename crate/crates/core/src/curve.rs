//! Estimators of the functions f(x) and F(x).
//!
//! Plug-in estimators substitute a fitted θ into the closed-form density and
//! distribution function. The UMVU estimators are the conditional density of
//! `X_1` given the sufficient statistic `T = t` and its integral:
//!
//! ```text
//! f̂(x) = (1+x)/A_n(t) · Σ_{k=0}^{n−1} C_{k,n} (t−x)^{2n−3−k},            0 < x < t
//! F̂(x) = 1/A_n(t) · Σ_k C_{k,n} t^{m_k} [I_{x/t}(1,m_k)/m_k + t·I_{x/t}(2,m_k)/(m_k(m_k+1))]
//! ```
//!
//! with `m_k = 2n−2−k`, `C_{k,n} = C(n−1,k)/Γ(m_k)` and
//! `A_n(t) = Σ_{j=0}^{n} C(n,j) t^{2n−j−1}/Γ(2n−j)`. All sums are carried out
//! in log space.

use alloc::vec::Vec;

// Unused when std is linked into the build, e.g. by dev-dependencies.
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::distribution::{cdf_unchecked, pdf_unchecked};
use crate::estimators::{fit_theta, EstimatorKind, ThetaEstimate};
use crate::special::{ln_binomial, ln_gamma_unchecked, log_sum_exp, reg_inc_beta_with_ln_beta};
use crate::{Error, Result, Sample};

fn check_theta_hat(theta_hat: f64) -> Result<()> {
    if theta_hat > 0.0 && theta_hat.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("theta estimate must be positive and finite", theta_hat))
    }
}

/// Plug-in density `θ̂²/(1+θ̂) (1+x) e^{−θ̂x}`.
pub fn plugin_pdf(x: f64, theta_hat: f64) -> Result<f64> {
    check_theta_hat(theta_hat)?;
    if !x.is_finite() {
        return Err(Error::domain("density argument must be finite", x));
    }
    Ok(pdf_unchecked(x, theta_hat))
}

/// Plug-in distribution function.
pub fn plugin_cdf(x: f64, theta_hat: f64) -> Result<f64> {
    check_theta_hat(theta_hat)?;
    if x.is_nan() {
        return Err(Error::domain("argument must not be NaN", x));
    }
    Ok(cdf_unchecked(x, theta_hat))
}

/// The `t`-independent part of the UMVU estimators for a fixed `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct UmvueCoefficients {
    n: usize,
    // ln C_{k,n}, k = 0..n-1
    ln_c: Vec<f64>,
    // ln[C(n,j)/Γ(2n−j)], j = 0..n
    ln_a_terms: Vec<f64>,
}

impl UmvueCoefficients {
    /// Requires `n >= 2`: for `n = 1` the exponents and gamma arguments of
    /// the conditional density are not defined.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("UMVUE needs a sample of size n >= 2", n as f64));
        }
        let ln_c = (0..n)
            .map(|k| {
                let m = (2 * n - 2 - k) as f64;
                ln_binomial((n - 1) as u64, k as u64).unwrap_or(f64::NEG_INFINITY)
                    - ln_gamma_unchecked(m)
            })
            .collect();
        let ln_a_terms = (0..=n)
            .map(|j| {
                ln_binomial(n as u64, j as u64).unwrap_or(f64::NEG_INFINITY)
                    - ln_gamma_unchecked((2 * n - j) as f64)
            })
            .collect();
        Ok(UmvueCoefficients {
            n,
            ln_c,
            ln_a_terms,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Binds the observed sum `t`.
    pub fn context(&self, t: f64) -> Result<UmvueContext> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::domain("UMVUE needs a positive finite sum t", t));
        }
        let n = self.n;
        let ln_t = t.ln();
        let ln_a = log_sum_exp(
            self.ln_a_terms
                .iter()
                .enumerate()
                .map(|(j, c)| c + (2 * n - j - 1) as f64 * ln_t),
        );
        Ok(UmvueContext {
            t,
            n,
            ln_t,
            ln_a,
            ln_c: self.ln_c.clone(),
        })
    }
}

/// The sufficient statistic `(t, n)` with the cached log-coefficients of the
/// UMVU estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct UmvueContext {
    t: f64,
    n: usize,
    ln_t: f64,
    ln_a: f64,
    ln_c: Vec<f64>,
}

impl UmvueContext {
    /// Requires `t > 0` and `n >= 2`.
    pub fn new(t: f64, n: usize) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::domain("UMVUE needs a positive finite sum t", t));
        }
        UmvueCoefficients::new(n)?.context(t)
    }

    pub fn from_sample(s: &Sample) -> Result<Self> {
        UmvueContext::new(s.sum(), s.len())
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `A_n(t)`; may overflow to infinity for very large `n` or `t`, the
    /// estimators themselves only use its logarithm.
    pub fn normalizer(&self) -> f64 {
        self.ln_a.exp()
    }

    pub fn ln_normalizer(&self) -> f64 {
        self.ln_a
    }

    /// `C_{k,n}` for `k < n`.
    pub fn coefficient(&self, k: usize) -> Option<f64> {
        self.ln_c.get(k).map(|c| c.exp())
    }

    fn pdf(&self, x: f64) -> f64 {
        if !(x > 0.0 && x < self.t) {
            return 0.0;
        }
        let n = self.n;
        let ln_gap = (self.t - x).ln();
        let ln_sum = log_sum_exp(
            self.ln_c
                .iter()
                .enumerate()
                .map(|(k, c)| c + (2 * n - 3 - k) as f64 * ln_gap),
        );
        (1.0 + x) * (ln_sum - self.ln_a).exp()
    }

    fn cdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Ok(0.0);
        }
        if x >= self.t {
            return Ok(1.0);
        }
        let n = self.n;
        let v = x / self.t;
        let mut terms = Vec::with_capacity(n);
        for (k, c) in self.ln_c.iter().enumerate() {
            let m = (2 * n - 2 - k) as f64;
            // ln B(1, m) = −ln m, ln B(2, m) = −ln(m(m+1))
            let i1 = reg_inc_beta_with_ln_beta(v, 1.0, m, -m.ln())?;
            let i2 = reg_inc_beta_with_ln_beta(v, 2.0, m, -(m * (m + 1.0)).ln())?;
            let bracket = i1 / m + self.t * i2 / (m * (m + 1.0));
            terms.push(c + m * self.ln_t + bracket.ln());
        }
        let value = (log_sum_exp(terms.iter().copied()) - self.ln_a).exp();
        Ok(value.clamp(0.0, 1.0))
    }
}

/// UMVU estimate of f(x); zero outside `(0, t)`.
pub fn umvue_pdf(x: f64, ctx: &UmvueContext) -> f64 {
    ctx.pdf(x)
}

/// UMVU estimate of F(x); zero for `x <= 0` and one for `x >= t`.
pub fn umvue_cdf(x: f64, ctx: &UmvueContext) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("argument must not be NaN", x));
    }
    ctx.cdf(x)
}

/// One evaluated point of an estimated curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatedCurvePoint {
    pub x: f64,
    pub pdf_hat: f64,
    pub cdf_hat: f64,
    pub method: EstimatorKind,
}

/// A fitted estimator of f and F.
#[derive(Debug, Clone, PartialEq)]
pub enum FittedCurve {
    Plugin(ThetaEstimate),
    Umvue(UmvueContext),
}

impl FittedCurve {
    pub fn fit(kind: EstimatorKind, s: &Sample) -> Result<Self> {
        match kind {
            EstimatorKind::Umvue => Ok(FittedCurve::Umvue(UmvueContext::from_sample(s)?)),
            other => Ok(FittedCurve::Plugin(fit_theta(other, s)?)),
        }
    }

    pub fn method(&self) -> EstimatorKind {
        match self {
            FittedCurve::Plugin(est) => est.method,
            FittedCurve::Umvue(_) => EstimatorKind::Umvue,
        }
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        match self {
            FittedCurve::Plugin(est) => plugin_pdf(x, est.theta_hat),
            FittedCurve::Umvue(ctx) => {
                if x.is_nan() {
                    return Err(Error::domain("argument must not be NaN", x));
                }
                Ok(umvue_pdf(x, ctx))
            }
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        match self {
            FittedCurve::Plugin(est) => plugin_cdf(x, est.theta_hat),
            FittedCurve::Umvue(ctx) => umvue_cdf(x, ctx),
        }
    }

    pub fn point(&self, x: f64) -> Result<EstimatedCurvePoint> {
        Ok(EstimatedCurvePoint {
            x,
            pdf_hat: self.pdf(x)?,
            cdf_hat: self.cdf(x)?,
            method: self.method(),
        })
    }
}
