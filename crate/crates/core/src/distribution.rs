//! The Lindley(θ) distribution.
//!
//! Density `θ²/(1+θ) (1+x) e^{-θx}` on `x > 0`; a mixture of Exponential(θ)
//! (weight `θ/(1+θ)`) and Gamma(2, θ) (weight `1/(1+θ)`).

use alloc::vec::Vec;

// Unused when std is linked into the build, e.g. by dev-dependencies.
#[allow(unused_imports)]
use num_traits::Float;
use rand_core::RngCore;
use serde::{Deserialize, Serialize};

use crate::rng::{self, open_unit};
use crate::special::{ln_binomial, ln_gamma_unchecked, log_sum_exp};
use crate::{Error, Result, Sample};

/// The parameter θ > 0.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct LindleyParam(f64);

impl LindleyParam {
    pub fn new(theta: f64) -> Result<Self> {
        if theta > 0.0 && theta.is_finite() {
            Ok(LindleyParam(theta))
        } else {
            Err(Error::domain("theta must be positive and finite", theta))
        }
    }

    pub fn theta(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for LindleyParam {
    type Error = Error;
    fn try_from(theta: f64) -> Result<Self> {
        LindleyParam::new(theta)
    }
}

impl From<LindleyParam> for f64 {
    fn from(p: LindleyParam) -> f64 {
        p.0
    }
}

fn finite(x: f64) -> Result<f64> {
    if x.is_nan() {
        Err(Error::domain("argument must not be NaN", x))
    } else {
        Ok(x)
    }
}

/// Density at `x`; zero off the support.
pub fn pdf(x: f64, p: LindleyParam) -> Result<f64> {
    let x = finite(x)?;
    if x.is_infinite() {
        return Err(Error::domain("density argument must be finite", x));
    }
    Ok(pdf_unchecked(x, p.0))
}

pub(crate) fn pdf_unchecked(x: f64, theta: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    theta * theta / (1.0 + theta) * (1.0 + x) * (-theta * x).exp()
}

/// `ln S(x)` for `x >= 0`, accurate at both ends of the support.
pub(crate) fn ln_survival_unchecked(x: f64, theta: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x == f64::INFINITY {
        return f64::NEG_INFINITY;
    }
    // ln S = ln(1 + a) - θx with a = θx/(1+θ), written as (ln(1+a) - a) - aθ
    // so both pieces are nonpositive.
    let a = theta * x / (1.0 + theta);
    let log1p_minus = if a < 1e-3 {
        let a2 = a * a;
        -a2 * (0.5 - a * (1.0 / 3.0 - a * (0.25 - a * (0.2 - a * (1.0 / 6.0 - a / 7.0)))))
    } else {
        a.ln_1p() - a
    };
    log1p_minus - a * theta
}

pub(crate) fn cdf_unchecked(x: f64, theta: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    -ln_survival_unchecked(x, theta).exp_m1()
}

pub(crate) fn survival_unchecked(x: f64, theta: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    (1.0 + theta + theta * x) * (-theta * x).exp() / (1.0 + theta)
}

/// Distribution function; `cdf(+∞) = 1`.
pub fn cdf(x: f64, p: LindleyParam) -> Result<f64> {
    Ok(cdf_unchecked(finite(x)?, p.0))
}

/// `1 - F(x)`, evaluated directly as `(1+θ+θx) e^{-θx} / (1+θ)`.
pub fn survival(x: f64, p: LindleyParam) -> Result<f64> {
    Ok(survival_unchecked(finite(x)?, p.0))
}

/// `ln(1 - F(x))`; finite for every finite `x`.
pub fn ln_survival(x: f64, p: LindleyParam) -> Result<f64> {
    Ok(ln_survival_unchecked(finite(x)?, p.0))
}

/// Inverse of [`cdf`] on (0, 1).
pub fn quantile(q: f64, p: LindleyParam) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain("quantile level must lie in (0, 1)", q));
    }
    let theta = p.0;
    // Increasing residual in x; the upper half is matched on the log-survival
    // scale to keep precision as q -> 1.
    let upper = q > 0.5;
    let ln_tail = (-q).ln_1p();
    let residual = |x: f64| {
        if upper {
            ln_tail - ln_survival_unchecked(x, theta)
        } else {
            cdf_unchecked(x, theta) - q
        }
    };
    let slope = |x: f64| {
        let f = pdf_unchecked(x, theta);
        if upper {
            f / survival_unchecked(x, theta)
        } else {
            f
        }
    };

    let mut lo = 0.0;
    let mut hi = 1.0 / theta;
    while residual(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let r = residual(x);
        if r == 0.0 {
            return Ok(x);
        }
        if r < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let d = slope(x);
        let newton = x - r / d;
        let next = if d > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 1e-15 * x.abs() || hi - lo <= 1e-15 * hi {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// One Lindley(θ) variate: with probability θ/(1+θ) an Exponential(θ) draw,
/// otherwise a Gamma(2, θ) draw formed as the sum of two exponentials.
pub fn draw<R: RngCore + ?Sized>(rng: &mut R, p: LindleyParam) -> f64 {
    let theta = p.0;
    let exp = |rng: &mut R| -open_unit(rng).ln() / theta;
    if open_unit(rng) < theta / (1.0 + theta) {
        exp(rng)
    } else {
        exp(rng) + exp(rng)
    }
}

/// Draws `n` variates from an explicit stream.
pub fn sample_from<R: RngCore + ?Sized>(rng: &mut R, n: usize, p: LindleyParam) -> Result<Sample> {
    if n == 0 {
        return Err(Error::domain("sample size must be at least 1", 0.0));
    }
    let values: Vec<f64> = (0..n).map(|_| draw(rng, p)).collect();
    Sample::new(values)
}

/// Draws `n` variates from the stream seeded by `seed`.
pub fn sample(n: usize, p: LindleyParam, seed: u64) -> Result<Sample> {
    sample_from(&mut rng::stream(seed), n, p)
}

/// `∂F(x; θ)/∂θ`, the Δ(x|θ) term of the minimum-distance normal equations.
///
/// Uses the factored form `θx e^{-θx} (θ + 2 + x(1+θ)) / (1+θ)²`, which is
/// algebraically equal to the two-term expression and has no cancellation.
pub fn cdf_dtheta(x: f64, p: LindleyParam) -> Result<f64> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::domain("cdf_dtheta needs a finite nonnegative x", x));
    }
    Ok(cdf_dtheta_unchecked(x, p.0))
}

pub(crate) fn cdf_dtheta_unchecked(x: f64, theta: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let opt = 1.0 + theta;
    theta * x * (-theta * x).exp() * (theta + 2.0 + x * opt) / (opt * opt)
}

/// Sample size and parameter of the law of `T = X_1 + ... + X_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumDensityParams {
    pub n: usize,
    pub theta: LindleyParam,
}

impl SumDensityParams {
    pub fn new(n: usize, theta: LindleyParam) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("sum density needs n >= 1", 0.0));
        }
        Ok(SumDensityParams { n, theta })
    }
}

/// The density of `T` as a binomial mixture of gamma densities with shapes
/// `2n - k`, with the log-weights and log-normalizers cached.
#[derive(Debug, Clone)]
pub struct SumDensity {
    params: SumDensityParams,
    // ln p_{k,n} + shape ln θ - ln Γ(shape), per k.
    ln_coef: Vec<f64>,
    shapes: Vec<f64>,
}

impl SumDensity {
    pub fn new(params: SumDensityParams) -> Self {
        let n = params.n;
        let theta = params.theta.theta();
        let ln_theta = theta.ln();
        let ln_norm = n as f64 * theta.ln_1p();
        let mut ln_coef = Vec::with_capacity(n + 1);
        let mut shapes = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let shape = (2 * n - k) as f64;
            let ln_weight = ln_binomial(n as u64, k as u64).unwrap_or(f64::NEG_INFINITY)
                + k as f64 * ln_theta
                - ln_norm;
            ln_coef.push(ln_weight + shape * ln_theta - ln_gamma_unchecked(shape));
            shapes.push(shape);
        }
        SumDensity {
            params,
            ln_coef,
            shapes,
        }
    }

    pub fn params(&self) -> SumDensityParams {
        self.params
    }

    /// `ln f(t; n, θ)` for `t > 0`.
    pub fn ln_pdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let ln_t = t.ln();
        let theta_t = self.params.theta.theta() * t;
        log_sum_exp(
            self.ln_coef
                .iter()
                .zip(&self.shapes)
                .map(|(c, m)| c + (m - 1.0) * ln_t - theta_t),
        )
    }

    pub fn pdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.ln_pdf(t).exp()
    }
}

/// Mixture weights `p_{k,n}(θ) = C(n,k) θ^k / (1+θ)^n`, k = 0..n.
pub fn mixture_weights(sp: SumDensityParams) -> Vec<f64> {
    let theta = sp.theta.theta();
    let n = sp.n;
    (0..=n)
        .map(|k| {
            (ln_binomial(n as u64, k as u64).unwrap_or(f64::NEG_INFINITY) + k as f64 * theta.ln()
                - n as f64 * theta.ln_1p())
            .exp()
        })
        .collect()
}

/// Density of the sum of `n` iid Lindley(θ) variables at `t > 0`.
pub fn sum_pdf(t: f64, sp: SumDensityParams) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain("sum density argument must be positive", t));
    }
    if sp.n == 0 {
        return Err(Error::domain("sum density needs n >= 1", 0.0));
    }
    Ok(SumDensity::new(sp).pdf(t))
}
