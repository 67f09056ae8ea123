//! Point estimators of θ.
//!
//! [`mle`] is closed form. The five minimum-distance estimators minimize a
//! discrepancy between the model CDF at the order statistics and their
//! plotting positions:
//!
//! | kind | objective |
//! |------|-----------|
//! | LSE  | Σ (F(x_{j:n}) − j/(n+1))² |
//! | WLSE | Σ w_j (F(x_{j:n}) − j/(n+1))², w_j = (n+1)²(n+2)/(j(n−j+1)) |
//! | PCE  | Σ (ln(1−p_i) − ln(1 − F(x_{i:n})))², p_i = i/(n+1) |
//! | CVME | 1/(12n) + Σ (F(x_{i:n}) − (2i−1)/(2n))² |
//! | ADE  | −n − (1/n) Σ (2i−1)(ln F(x_{i:n}) + ln(1 − F(x_{n+1−i:n}))) |
//!
//! Each fit scans the bracket on a log grid, refines with Brent's method and
//! finally polishes the minimizer on the analytic derivative inside the
//! refined cell.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

// Unused when std is linked into the build, e.g. by dev-dependencies.
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::distribution::{cdf_dtheta_unchecked, cdf_unchecked, ln_survival_unchecked};
use crate::optimize::{find_root, minimize_log_scan, Bracket, Minimum, DEFAULT_TOL};
use crate::{Error, Result, Sample};

/// Default search interval for θ.
pub const DEFAULT_BRACKET: (f64, f64) = (1e-6, 100.0);
/// Interval used once when the first fit lands on a bracket endpoint.
pub const EXPANDED_BRACKET: (f64, f64) = (1e-9, 1e4);
const SCAN_POINTS: usize = 96;

/// The estimation procedures, in their canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EstimatorKind {
    #[serde(rename = "MLE")]
    Mle,
    #[serde(rename = "UMVUE")]
    Umvue,
    #[serde(rename = "PCE")]
    Pce,
    #[serde(rename = "LSE")]
    Lse,
    #[serde(rename = "WLSE")]
    Wlse,
    #[serde(rename = "CVME")]
    Cvme,
    #[serde(rename = "ADE")]
    Ade,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 7] = [
        EstimatorKind::Mle,
        EstimatorKind::Umvue,
        EstimatorKind::Pce,
        EstimatorKind::Lse,
        EstimatorKind::Wlse,
        EstimatorKind::Cvme,
        EstimatorKind::Ade,
    ];

    /// The five estimators defined by minimizing an objective.
    pub const MINIMUM_DISTANCE: [EstimatorKind; 5] = [
        EstimatorKind::Pce,
        EstimatorKind::Lse,
        EstimatorKind::Wlse,
        EstimatorKind::Cvme,
        EstimatorKind::Ade,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::Mle => "MLE",
            EstimatorKind::Umvue => "UMVUE",
            EstimatorKind::Pce => "PCE",
            EstimatorKind::Lse => "LSE",
            EstimatorKind::Wlse => "WLSE",
            EstimatorKind::Cvme => "CVME",
            EstimatorKind::Ade => "ADE",
        }
    }

    /// UMVUE estimates f and F directly and has no θ estimate.
    pub fn estimates_theta(self) -> bool {
        self != EstimatorKind::Umvue
    }

    pub fn is_minimum_distance(self) -> bool {
        !matches!(self, EstimatorKind::Mle | EstimatorKind::Umvue)
    }

    /// Smallest sample size the procedure accepts.
    pub fn min_sample_size(self) -> usize {
        match self {
            EstimatorKind::Mle | EstimatorKind::Cvme | EstimatorKind::Ade => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        EstimatorKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or(Error::domain("unknown estimator name", f64::NAN))
    }
}

/// A fitted θ with provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaEstimate {
    pub theta_hat: f64,
    pub method: EstimatorKind,
    /// Objective at `theta_hat`; `None` for the closed-form MLE.
    pub objective_value: Option<f64>,
    pub evaluations: usize,
    /// False when the minimizer still sits on the expanded bracket boundary.
    pub converged: bool,
}

/// Plotting positions `i/(n+1)` and the inverse-variance weights of
/// `F(X_{j:n})`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlottingPositions {
    pub positions: Vec<f64>,
    pub weights: Vec<f64>,
}

impl PlottingPositions {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("plotting positions need n >= 1", 0.0));
        }
        let nf = n as f64;
        let positions = (1..=n).map(|j| j as f64 / (nf + 1.0)).collect();
        let scale = (nf + 1.0) * (nf + 1.0) * (nf + 2.0);
        let weights = (1..=n)
            .map(|j| scale / (j as f64 * (nf - j as f64 + 1.0)))
            .collect();
        Ok(PlottingPositions { positions, weights })
    }
}

/// `g(t) = [−(t−n) + √((t−n)² + 8tn)] / (2t)`, the MLE as a function of the
/// sample sum.
pub fn g_of_t(t: f64, n: usize) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain("g(t) needs a positive finite t", t));
    }
    if n == 0 {
        return Err(Error::domain("g(t) needs n >= 1", 0.0));
    }
    Ok(g_unchecked(t, n as f64))
}

pub(crate) fn g_unchecked(t: f64, n: f64) -> f64 {
    let d = t - n;
    let root = (d * d + 8.0 * t * n).sqrt();
    if d > 0.0 {
        // Rationalized to avoid cancellation when t >> n.
        4.0 * n / (d + root)
    } else {
        (root - d) / (2.0 * t)
    }
}

/// Closed-form maximum likelihood estimate.
pub fn mle(s: &Sample) -> ThetaEstimate {
    ThetaEstimate {
        theta_hat: g_unchecked(s.sum(), s.len() as f64),
        method: EstimatorKind::Mle,
        objective_value: None,
        evaluations: 0,
        converged: true,
    }
}

/// How the percentile residual is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PercentileResidual {
    /// `ln(1−p_i) − ln(1 − F(x_{i:n}; θ))`.
    #[default]
    LogSurvival,
    /// `ln(1−p_i) − ln((1+θ+θx)/(1+θ)) − θx`, the sign of the last term
    /// flipped relative to the log-survival form. Kept for comparison with
    /// published numbers only.
    FlippedExponent,
}

fn check_n(s: &Sample, kind: EstimatorKind) -> Result<()> {
    if s.len() < kind.min_sample_size() {
        return Err(Error::domain(
            "sample too small for this estimator",
            s.len() as f64,
        ));
    }
    Ok(())
}

/// LSE objective on ascending order statistics.
pub fn lse_objective(sorted: &[f64], theta: f64) -> f64 {
    let n1 = sorted.len() as f64 + 1.0;
    sorted
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            let r = cdf_unchecked(x, theta) - (j + 1) as f64 / n1;
            r * r
        })
        .sum()
}

/// WLSE objective on ascending order statistics.
pub fn wlse_objective(sorted: &[f64], theta: f64) -> f64 {
    let n = sorted.len() as f64;
    let scale = (n + 1.0) * (n + 1.0) * (n + 2.0);
    sorted
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            let jf = (j + 1) as f64;
            let w = scale / (jf * (n - jf + 1.0));
            let r = cdf_unchecked(x, theta) - jf / (n + 1.0);
            w * r * r
        })
        .sum()
}

fn percentile_residual(x: f64, p: f64, theta: f64, form: PercentileResidual) -> f64 {
    let ln_tail = (-p).ln_1p();
    match form {
        PercentileResidual::LogSurvival => ln_tail - ln_survival_unchecked(x, theta),
        PercentileResidual::FlippedExponent => {
            ln_tail - (theta * x / (1.0 + theta)).ln_1p() - theta * x
        }
    }
}

fn percentile_residual_dtheta(x: f64, theta: f64, form: PercentileResidual) -> f64 {
    match form {
        // d/dθ[−ln S] = Δ/S
        PercentileResidual::LogSurvival => delta_over_survival(x, theta),
        PercentileResidual::FlippedExponent => -x / ((1.0 + theta) * (1.0 + theta + theta * x)) - x,
    }
}

/// PCE objective on ascending order statistics.
pub fn pce_objective(sorted: &[f64], theta: f64, form: PercentileResidual) -> f64 {
    let n1 = sorted.len() as f64 + 1.0;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let r = percentile_residual(x, (i + 1) as f64 / n1, theta, form);
            r * r
        })
        .sum()
}

/// Cramér–von Mises objective `C(θ)` on ascending order statistics.
pub fn cvme_objective(sorted: &[f64], theta: f64) -> f64 {
    let n = sorted.len() as f64;
    1.0 / (12.0 * n)
        + sorted
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let r = cdf_unchecked(x, theta) - (2 * i + 1) as f64 / (2.0 * n);
                r * r
            })
            .sum::<f64>()
}

fn ln_cdf(x: f64, theta: f64) -> f64 {
    (-ln_survival_unchecked(x, theta).exp_m1()).ln()
}

/// Anderson–Darling objective `A(θ)` on ascending order statistics.
/// Returns +∞ when some `F(x_{i:n})` underflows to zero.
pub fn ade_objective(sorted: &[f64], theta: f64) -> f64 {
    let n = sorted.len();
    let nf = n as f64;
    let sum: f64 = (0..n)
        .map(|i| {
            let lower = ln_cdf(sorted[i], theta);
            let upper = ln_survival_unchecked(sorted[n - 1 - i], theta);
            (2 * i + 1) as f64 * (lower + upper)
        })
        .sum();
    let a = -nf - sum / nf;
    if a.is_nan() {
        f64::INFINITY
    } else {
        a
    }
}

/// `Σ (F(x_{j:n}) − j/(n+1)) Δ(x_{j:n})`, zero at an interior LSE.
pub fn lse_stationarity(sorted: &[f64], theta: f64) -> f64 {
    let n1 = sorted.len() as f64 + 1.0;
    sorted
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            (cdf_unchecked(x, theta) - (j + 1) as f64 / n1) * cdf_dtheta_unchecked(x, theta)
        })
        .sum()
}

/// `Σ w_j (F(x_{j:n}) − j/(n+1)) Δ(x_{j:n})`.
pub fn wlse_stationarity(sorted: &[f64], theta: f64) -> f64 {
    let n = sorted.len() as f64;
    let scale = (n + 1.0) * (n + 1.0) * (n + 2.0);
    sorted
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            let jf = (j + 1) as f64;
            let w = scale / (jf * (n - jf + 1.0));
            w * (cdf_unchecked(x, theta) - jf / (n + 1.0)) * cdf_dtheta_unchecked(x, theta)
        })
        .sum()
}

/// `Σ r_i ∂r_i/∂θ` for the percentile residuals.
pub fn pce_stationarity(sorted: &[f64], theta: f64, form: PercentileResidual) -> f64 {
    let n1 = sorted.len() as f64 + 1.0;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            percentile_residual(x, (i + 1) as f64 / n1, theta, form)
                * percentile_residual_dtheta(x, theta, form)
        })
        .sum()
}

/// `Σ (F(x_{i:n}) − (2i−1)/(2n)) Δ(x_{i:n})`, zero at an interior CVME.
pub fn cvme_stationarity(sorted: &[f64], theta: f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            (cdf_unchecked(x, theta) - (2 * i + 1) as f64 / (2.0 * n))
                * cdf_dtheta_unchecked(x, theta)
        })
        .sum()
}

// Δ/S without forming e^{-θx}.
fn delta_over_survival(x: f64, theta: f64) -> f64 {
    let opt = 1.0 + theta;
    theta * x * (theta + 2.0 + x * opt) / (opt * (opt + theta * x))
}

/// `Σ (2i−1) [Δ(x_{i:n})/F(x_{i:n}) − Δ(x_{n+1−i:n})/F̄(x_{n+1−i:n})]`,
/// zero at an interior ADE.
pub fn ade_stationarity(sorted: &[f64], theta: f64) -> f64 {
    let n = sorted.len();
    (0..n)
        .map(|i| {
            let lo = sorted[i];
            let hi = sorted[n - 1 - i];
            let f_lo = cdf_unchecked(lo, theta);
            (2 * i + 1) as f64
                * (cdf_dtheta_unchecked(lo, theta) / f_lo - delta_over_survival(hi, theta))
        })
        .sum()
}

struct Problem<'a> {
    sorted: &'a [f64],
    kind: EstimatorKind,
    form: PercentileResidual,
}

impl Problem<'_> {
    fn objective(&self, theta: f64) -> f64 {
        let s = self.sorted;
        match self.kind {
            EstimatorKind::Lse => lse_objective(s, theta),
            EstimatorKind::Wlse => wlse_objective(s, theta),
            EstimatorKind::Pce => pce_objective(s, theta, self.form),
            EstimatorKind::Cvme => cvme_objective(s, theta),
            EstimatorKind::Ade => ade_objective(s, theta),
            EstimatorKind::Mle | EstimatorKind::Umvue => f64::NAN,
        }
    }

    /// A positive multiple of the objective's derivative.
    fn slope(&self, theta: f64) -> f64 {
        let s = self.sorted;
        match self.kind {
            EstimatorKind::Lse => lse_stationarity(s, theta),
            EstimatorKind::Wlse => wlse_stationarity(s, theta),
            EstimatorKind::Pce => pce_stationarity(s, theta, self.form),
            EstimatorKind::Cvme => cvme_stationarity(s, theta),
            EstimatorKind::Ade => -ade_stationarity(s, theta),
            EstimatorKind::Mle | EstimatorKind::Umvue => f64::NAN,
        }
    }

    fn minimize(&self, lo: f64, hi: f64) -> Result<Minimum> {
        let bracket = Bracket::new(lo, hi, DEFAULT_TOL)?;
        let m = minimize_log_scan(|t| self.objective(t), bracket, SCAN_POINTS)?;
        Ok(self.polish(m, lo, hi))
    }

    // The AD objective is a sum of order n with n subtracted from it.
    fn rounding_slack(&self, value: f64) -> f64 {
        let n = self.sorted.len() as f64;
        let scale = match self.kind {
            EstimatorKind::Ade => n + value.abs(),
            _ => value.abs(),
        };
        8.0 * n * f64::EPSILON * scale
    }

    /// Solves the normal equation next to a Brent minimizer. The result is
    /// kept only if it does not raise the objective beyond rounding.
    fn polish(&self, m: Minimum, lo: f64, hi: f64) -> Minimum {
        let slope = |t: f64| self.slope(t);
        let mut h = DEFAULT_TOL.max(1e-7 * m.argmin);
        let mut extra = 0;
        for _ in 0..8 {
            let a = (m.argmin - h).max(lo);
            let b = (m.argmin + h).min(hi);
            let (sa, sb) = (slope(a), slope(b));
            extra += 2;
            if !(sa.is_finite() && sb.is_finite()) {
                break;
            }
            if sa <= 0.0 && sb >= 0.0 {
                let Ok(br) = Bracket::new(a, b, 1e-3 * f64::EPSILON * m.argmin) else {
                    break;
                };
                if let Ok(root) = find_root(slope, br) {
                    let v = self.objective(root);
                    extra += 40;
                    if v.is_finite() && v <= m.value + self.rounding_slack(m.value) {
                        return Minimum {
                            argmin: root,
                            value: v,
                            evaluations: m.evaluations + extra,
                        };
                    }
                }
                break;
            }
            h *= 4.0;
        }
        Minimum {
            evaluations: m.evaluations + extra,
            ..m
        }
    }
}

fn on_edge(m: &Minimum, lo: f64, hi: f64) -> bool {
    m.argmin - lo <= DEFAULT_TOL || hi - m.argmin <= DEFAULT_TOL
}

fn fit_min_distance(s: &Sample, kind: EstimatorKind, form: PercentileResidual) -> Result<ThetaEstimate> {
    check_n(s, kind)?;
    let problem = Problem {
        sorted: s.sorted(),
        kind,
        form,
    };
    let (lo, hi) = DEFAULT_BRACKET;
    let mut m = problem.minimize(lo, hi)?;
    let mut evaluations = m.evaluations;
    let mut converged = true;
    if on_edge(&m, lo, hi) {
        let (lo, hi) = EXPANDED_BRACKET;
        m = problem.minimize(lo, hi)?;
        evaluations += m.evaluations;
        converged = !on_edge(&m, lo, hi);
    }
    Ok(ThetaEstimate {
        theta_hat: m.argmin,
        method: kind,
        objective_value: Some(m.value),
        evaluations,
        converged,
    })
}

/// Least-squares estimate.
pub fn lse(s: &Sample) -> Result<ThetaEstimate> {
    fit_min_distance(s, EstimatorKind::Lse, PercentileResidual::default())
}

/// Weighted least-squares estimate.
pub fn wlse(s: &Sample) -> Result<ThetaEstimate> {
    fit_min_distance(s, EstimatorKind::Wlse, PercentileResidual::default())
}

/// Percentile estimate with log-survival residuals.
pub fn pce(s: &Sample) -> Result<ThetaEstimate> {
    pce_with(s, PercentileResidual::default())
}

pub fn pce_with(s: &Sample, form: PercentileResidual) -> Result<ThetaEstimate> {
    fit_min_distance(s, EstimatorKind::Pce, form)
}

/// Cramér–von Mises minimum-distance estimate.
pub fn cvme(s: &Sample) -> Result<ThetaEstimate> {
    fit_min_distance(s, EstimatorKind::Cvme, PercentileResidual::default())
}

/// Anderson–Darling minimum-distance estimate.
pub fn ade(s: &Sample) -> Result<ThetaEstimate> {
    fit_min_distance(s, EstimatorKind::Ade, PercentileResidual::default())
}

/// Fits θ with any estimator except UMVUE.
pub fn fit_theta(kind: EstimatorKind, s: &Sample) -> Result<ThetaEstimate> {
    match kind {
        EstimatorKind::Mle => Ok(mle(s)),
        EstimatorKind::Umvue => Err(Error::domain(
            "UMVUE estimates f and F directly; it has no estimate of theta",
            f64::NAN,
        )),
        other => fit_min_distance(s, other, PercentileResidual::default()),
    }
}

/// The objective minimized by `kind`, evaluated on the sample at `theta`.
pub fn objective(kind: EstimatorKind, s: &Sample, theta: f64) -> Result<f64> {
    if !kind.is_minimum_distance() {
        return Err(Error::domain("estimator has no objective function", f64::NAN));
    }
    Ok(Problem {
        sorted: s.sorted(),
        kind,
        form: PercentileResidual::default(),
    }
    .objective(theta))
}
