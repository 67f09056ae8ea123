//! Special functions: log-gamma, regularized incomplete beta and gamma,
//! the gamma density and log-space binomial coefficients.

// Unused when std is linked into the build, e.g. by dev-dependencies.
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// Lanczos approximation, g = 607/128, 15 terms (Godfrey).
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_76e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;
const CF_MAX_ITER: usize = 10_000;

/// Arguments of the regularized incomplete beta function `I_p(alpha, beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaArgs {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl BetaArgs {
    pub fn new(p: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain("incomplete beta limit must lie in [0, 1]", p));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::domain("incomplete beta alpha must be positive", alpha));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::domain("incomplete beta beta must be positive", beta));
        }
        Ok(BetaArgs { p, alpha, beta })
    }
}

/// Natural logarithm of the gamma function for `z > 0`.
pub fn log_gamma(z: f64) -> Result<f64> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain("log_gamma needs a positive finite argument", z));
    }
    Ok(ln_gamma_unchecked(z))
}

pub(crate) fn ln_gamma_unchecked(z: f64) -> f64 {
    if z < 0.5 {
        // Γ(z) = Γ(z + 1) / z keeps the series on its accurate branch.
        return lanczos(z + 1.0) - z.ln();
    }
    lanczos(z)
}

fn lanczos(z: f64) -> f64 {
    let z = z - 1.0;
    let mut sum = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + sum.ln()
}

/// `ln B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}

/// `ln C(n, k)` computed from log-gamma differences.
pub fn ln_binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::domain("binomial k exceeds n", k as f64));
    }
    let (n, k) = (n as f64, k as f64);
    Ok(ln_gamma_unchecked(n + 1.0) - ln_gamma_unchecked(k + 1.0) - ln_gamma_unchecked(n - k + 1.0))
}

/// Regularized incomplete beta function `I_p(alpha, beta)`.
///
/// Evaluated by the modified Lentz continued fraction, switching to
/// `1 - I_{1-p}(beta, alpha)` when `p > alpha / (alpha + beta)`.
pub fn reg_inc_beta(args: BetaArgs) -> Result<f64> {
    let BetaArgs { p, alpha: a, beta: b } = BetaArgs::new(args.p, args.alpha, args.beta)?;
    if p == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    let ln_b = ln_gamma_unchecked(a) + ln_gamma_unchecked(b) - ln_gamma_unchecked(a + b);
    reg_inc_beta_with_ln_beta(p, a, b, ln_b)
}

/// [`reg_inc_beta`] on validated interior arguments with `ln B(a, b)`
/// supplied by the caller.
pub(crate) fn reg_inc_beta_with_ln_beta(p: f64, a: f64, b: f64, ln_b: f64) -> Result<f64> {
    let value = if p <= a / (a + b) {
        let front = (a * p.ln() + b * (-p).ln_1p() - ln_b).exp();
        front * beta_cf(p, a, b)? / a
    } else {
        let q = 1.0 - p;
        let front = (b * q.ln() + a * (-q).ln_1p() - ln_b).exp();
        1.0 - front * beta_cf(q, b, a)? / b
    };
    Ok(value.clamp(0.0, 1.0))
}

fn beta_cf(x: f64, a: f64, b: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            return Ok(h);
        }
    }
    Err(Error::BudgetExhausted {
        evaluations: CF_MAX_ITER,
    })
}

/// Regularized lower incomplete gamma `P(shape, x)`.
pub fn reg_lower_gamma(shape: f64, x: f64) -> Result<f64> {
    let (p, _) = reg_gamma_pair(shape, x)?;
    Ok(p)
}

/// Regularized upper incomplete gamma `Q(shape, x) = 1 - P(shape, x)`,
/// computed without cancellation in the upper tail.
pub fn reg_upper_gamma(shape: f64, x: f64) -> Result<f64> {
    let (_, q) = reg_gamma_pair(shape, x)?;
    Ok(q)
}

fn reg_gamma_pair(a: f64, x: f64) -> Result<(f64, f64)> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain("incomplete gamma shape must be positive", a));
    }
    if !(x >= 0.0) {
        return Err(Error::domain("incomplete gamma argument must be nonnegative", x));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x == f64::INFINITY {
        return Ok((1.0, 0.0));
    }
    let ln_front = a * x.ln() - x - ln_gamma_unchecked(a);
    if x < a + 1.0 {
        // Series for P.
        let mut ap = a;
        let mut del = 1.0 / a;
        let mut sum = del;
        for _ in 0..CF_MAX_ITER {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * CF_EPS {
                let p = (sum * ln_front.exp()).min(1.0);
                return Ok((p, 1.0 - p));
            }
        }
        Err(Error::BudgetExhausted {
            evaluations: CF_MAX_ITER,
        })
    } else {
        // Continued fraction for Q.
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / CF_TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=CF_MAX_ITER {
            let i = i as f64;
            let an = -i * (i - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < CF_TINY {
                d = CF_TINY;
            }
            c = b + an / c;
            if c.abs() < CF_TINY {
                c = CF_TINY;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < CF_EPS {
                let q = (ln_front.exp() * h).min(1.0);
                return Ok((1.0 - q, q));
            }
        }
        Err(Error::BudgetExhausted {
            evaluations: CF_MAX_ITER,
        })
    }
}

/// Gamma density with the given shape and rate, `rate^m t^(m-1) e^(-rate t) / Γ(m)`.
pub fn gamma_pdf(t: f64, shape: f64, rate: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain("gamma density argument must be positive", t));
    }
    if !(shape > 0.0 && shape.is_finite()) {
        return Err(Error::domain("gamma shape must be positive", shape));
    }
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::domain("gamma rate must be positive", rate));
    }
    Ok(ln_gamma_pdf(t, shape, rate).exp())
}

pub(crate) fn ln_gamma_pdf(t: f64, shape: f64, rate: f64) -> f64 {
    shape * rate.ln() + (shape - 1.0) * t.ln() - rate * t - ln_gamma_unchecked(shape)
}

/// `ln Σ exp(terms)`, robust to terms far below or above zero.
pub fn log_sum_exp<I>(terms: I) -> f64
where
    I: IntoIterator<Item = f64> + Clone,
{
    let max = terms
        .clone()
        .into_iter()
        .fold(f64::NEG_INFINITY, |m, v| if v > m { v } else { m });
    if max == f64::NEG_INFINITY || !max.is_finite() {
        return max;
    }
    let sum: f64 = terms.into_iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}
