//! Monte Carlo comparison of the PDF and CDF estimators.
//!
//! Replication `r` draws its sample from substream `mix(master_seed, r)`; the
//! sample of size `n` is the first `n` draws of that stream, so different
//! sample sizes share common random numbers. Aggregation always runs in
//! replication-index order, which makes a report a pure function of its
//! [`SimConfig`] no matter how replications were scheduled.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

// Unused when std is linked into the build, e.g. by dev-dependencies.
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::curve::{plugin_cdf, plugin_pdf, umvue_cdf, umvue_pdf, UmvueCoefficients};
use crate::distribution::{quantile, sample_from};
use crate::estimators::{fit_theta, EstimatorKind};
use crate::rng::substream;
use crate::risk::Target;
use crate::{Error, LindleyParam, Result};

pub const DEFAULT_REPLICATIONS: usize = 1000;
pub const DEFAULT_QUANTILE_LEVELS: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

fn default_replications() -> usize {
    DEFAULT_REPLICATIONS
}

fn default_methods() -> Vec<EstimatorKind> {
    EstimatorKind::ALL.to_vec()
}

/// Where the estimated curves are evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalPoints {
    /// Absolute abscissae `x >= 0`.
    Values(Vec<f64>),
    /// Quantile levels in (0, 1) of Lindley(θ₀).
    Quantiles(Vec<f64>),
}

impl Default for EvalPoints {
    fn default() -> Self {
        EvalPoints::Quantiles(DEFAULT_QUANTILE_LEVELS.to_vec())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub theta0: f64,
    pub sample_sizes: Vec<usize>,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default)]
    pub eval_points: EvalPoints,
    #[serde(default = "default_methods")]
    pub methods: Vec<EstimatorKind>,
    pub master_seed: u64,
}

/// One violated constraint of a [`SimConfig`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigIssue {
    pub field: String,
    pub message: String,
}

impl ConfigIssue {
    fn new(field: &str, message: &str) -> Self {
        ConfigIssue {
            field: field.to_string(),
            message: message.to_string(),
        }
    }
}

impl SimConfig {
    /// A config with the default grid, replication count and method set.
    pub fn new(theta0: f64, sample_sizes: Vec<usize>, master_seed: u64) -> Self {
        SimConfig {
            theta0,
            sample_sizes,
            replications: DEFAULT_REPLICATIONS,
            eval_points: EvalPoints::default(),
            methods: default_methods(),
            master_seed,
        }
    }

    /// Collects every violated constraint rather than stopping at the first.
    pub fn validate(&self) -> core::result::Result<(), Vec<ConfigIssue>> {
        let mut issues = Vec::new();
        if !(self.theta0 > 0.0 && self.theta0.is_finite()) {
            issues.push(ConfigIssue::new("theta0", "must be positive and finite"));
        }
        if self.sample_sizes.is_empty() {
            issues.push(ConfigIssue::new("sample_sizes", "must not be empty"));
        }
        if self.sample_sizes.iter().any(|&n| n < 2) {
            let msg = if self.methods.contains(&EstimatorKind::Umvue) {
                "every sample size must be >= 2 (UMVUE is undefined for n = 1)"
            } else {
                "every sample size must be >= 2"
            };
            issues.push(ConfigIssue::new("sample_sizes", msg));
        }
        if self.replications == 0 {
            issues.push(ConfigIssue::new("replications", "must be positive"));
        }
        match &self.eval_points {
            EvalPoints::Values(v) => {
                if v.is_empty() {
                    issues.push(ConfigIssue::new("eval_points.values", "must not be empty"));
                }
                if v.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
                    issues.push(ConfigIssue::new(
                        "eval_points.values",
                        "every point must be finite and >= 0",
                    ));
                }
            }
            EvalPoints::Quantiles(q) => {
                if q.is_empty() {
                    issues.push(ConfigIssue::new("eval_points.quantiles", "must not be empty"));
                }
                if q.iter().any(|p| !(*p > 0.0 && *p < 1.0)) {
                    issues.push(ConfigIssue::new(
                        "eval_points.quantiles",
                        "every level must lie in (0, 1)",
                    ));
                }
            }
        }
        if self.methods.is_empty() {
            issues.push(ConfigIssue::new("methods", "must not be empty"));
        }
        let mut seen = Vec::new();
        for m in &self.methods {
            if seen.contains(m) {
                issues.push(ConfigIssue::new("methods", "must not repeat a method"));
                break;
            }
            seen.push(*m);
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(issues)
        }
    }

    /// Evaluation abscissae, resolving quantile levels under θ₀.
    pub fn resolve_eval_points(&self) -> Result<Vec<f64>> {
        match &self.eval_points {
            EvalPoints::Values(v) => Ok(v.clone()),
            EvalPoints::Quantiles(q) => {
                let p = LindleyParam::new(self.theta0)?;
                q.iter().map(|&level| quantile(level, p)).collect()
            }
        }
    }
}

/// Estimates from one replication: per method, `(pdf_hat, cdf_hat)` at each
/// evaluation point, or `None` if the fit failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Replication {
    pub estimates: Vec<Option<Vec<[f64; 2]>>>,
}

/// A validated config with everything replications share precomputed.
#[derive(Debug, Clone)]
pub struct SimPlan {
    config: SimConfig,
    theta0: LindleyParam,
    eval_x: Vec<f64>,
    truth: Vec<[f64; 2]>,
    umvue: Vec<Option<UmvueCoefficients>>,
}

impl SimPlan {
    pub fn new(config: SimConfig) -> core::result::Result<Self, Vec<ConfigIssue>> {
        config.validate()?;
        let theta0 = LindleyParam::new(config.theta0)
            .map_err(|_| vec![ConfigIssue::new("theta0", "must be positive and finite")])?;
        let eval_x = config
            .resolve_eval_points()
            .map_err(|_| vec![ConfigIssue::new("eval_points", "could not be resolved")])?;
        let truth = eval_x
            .iter()
            .map(|&x| {
                [
                    Target::Pdf.evaluate(x, theta0.theta()),
                    Target::Cdf.evaluate(x, theta0.theta()),
                ]
            })
            .collect();
        let wants_umvue = config.methods.contains(&EstimatorKind::Umvue);
        let umvue = config
            .sample_sizes
            .iter()
            .map(|&n| {
                if wants_umvue {
                    UmvueCoefficients::new(n).ok()
                } else {
                    None
                }
            })
            .collect();
        Ok(SimPlan {
            config,
            theta0,
            eval_x,
            truth,
            umvue,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn eval_x(&self) -> &[f64] {
        &self.eval_x
    }

    /// Runs replication `r` at `sample_sizes[size_index]`.
    pub fn replicate(&self, size_index: usize, r: usize) -> Replication {
        let n = self.config.sample_sizes[size_index];
        let mut rng = substream(self.config.master_seed, r as u64);
        let sample = match sample_from(&mut rng, n, self.theta0) {
            Ok(s) => s,
            Err(_) => {
                return Replication {
                    estimates: vec![None; self.config.methods.len()],
                }
            }
        };
        let estimates = self
            .config
            .methods
            .iter()
            .map(|&kind| -> Option<Vec<[f64; 2]>> {
                if kind == EstimatorKind::Umvue {
                    let ctx = self.umvue[size_index].as_ref()?.context(sample.sum()).ok()?;
                    self.eval_x
                        .iter()
                        .map(|&x| Some([umvue_pdf(x, &ctx), umvue_cdf(x, &ctx).ok()?]))
                        .collect()
                } else {
                    let th = fit_theta(kind, &sample).ok()?.theta_hat;
                    self.eval_x
                        .iter()
                        .map(|&x| Some([plugin_pdf(x, th).ok()?, plugin_cdf(x, th).ok()?]))
                        .collect()
                }
            })
            .collect();
        Replication { estimates }
    }

    /// Aggregates replications, `by_size[i][r]` holding replication `r` at
    /// `sample_sizes[i]`.
    pub fn aggregate(&self, by_size: &[Vec<Replication>]) -> Result<MseReport> {
        let cfg = &self.config;
        if by_size.len() != cfg.sample_sizes.len() {
            return Err(Error::domain(
                "one replication list per sample size is required",
                by_size.len() as f64,
            ));
        }
        let nx = self.eval_x.len();
        let mut cells = Vec::new();
        let mut summaries = Vec::new();
        for (mi, &method) in cfg.methods.iter().enumerate() {
            for (si, &n) in cfg.sample_sizes.iter().enumerate() {
                let reps = &by_size[si];
                let used: Vec<&Vec<[f64; 2]>> =
                    reps.iter().filter_map(|r| r.estimates[mi].as_ref()).collect();
                let excluded = reps.len() - used.len();
                for (xi, &x) in self.eval_x.iter().enumerate() {
                    for (ti, target) in [Target::Pdf, Target::Cdf].into_iter().enumerate() {
                        let truth = self.truth[xi][ti];
                        let mut est = Moments::default();
                        let mut err = Moments::default();
                        for e in &used {
                            est.push(e[xi][ti]);
                            let d = e[xi][ti] - truth;
                            err.push(d * d);
                        }
                        let mean_estimate = est.mean();
                        cells.push(MseCell {
                            method,
                            n,
                            x,
                            target,
                            truth,
                            mean_estimate,
                            bias: mean_estimate - truth,
                            bias_se: est.standard_error(),
                            mse: err.mean(),
                            se: err.standard_error(),
                            replications: used.len(),
                        });
                    }
                }
                for (ti, target) in [Target::Pdf, Target::Cdf].into_iter().enumerate() {
                    let mut avg = Moments::default();
                    for e in &used {
                        let s: f64 = (0..nx)
                            .map(|xi| {
                                let d = e[xi][ti] - self.truth[xi][ti];
                                d * d
                            })
                            .sum();
                        avg.push(s / nx as f64);
                    }
                    summaries.push(MseSummary {
                        method,
                        n,
                        target,
                        avg_mse: avg.mean(),
                        se: avg.standard_error(),
                        replications_used: used.len(),
                        excluded,
                    });
                }
            }
        }
        Ok(MseReport {
            config: cfg.clone(),
            eval_x: self.eval_x.clone(),
            cells,
            summaries,
        })
    }
}

#[derive(Default)]
struct Moments {
    count: usize,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.count += 1;
        self.sum += v;
        self.sum_sq += v * v;
    }

    fn mean(&self) -> f64 {
        if self.count == 0 {
            return f64::NAN;
        }
        self.sum / self.count as f64
    }

    fn standard_error(&self) -> f64 {
        if self.count < 2 {
            return f64::NAN;
        }
        let n = self.count as f64;
        let mean = self.sum / n;
        let var = ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}

/// Empirical bias and MSE at one (method, n, x, target).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MseCell {
    pub method: EstimatorKind,
    pub n: usize,
    pub x: f64,
    pub target: Target,
    pub truth: f64,
    pub mean_estimate: f64,
    pub bias: f64,
    /// Monte Carlo standard error of `mean_estimate` (and of `bias`).
    pub bias_se: f64,
    pub mse: f64,
    /// Monte Carlo standard error of `mse`.
    pub se: f64,
    pub replications: usize,
}

/// MSE averaged over the evaluation grid for one (method, n, target).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MseSummary {
    pub method: EstimatorKind,
    pub n: usize,
    pub target: Target,
    pub avg_mse: f64,
    pub se: f64,
    pub replications_used: usize,
    /// Replications whose fit failed for this method and were left out.
    pub excluded: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MseReport {
    pub config: SimConfig,
    pub eval_x: Vec<f64>,
    pub cells: Vec<MseCell>,
    pub summaries: Vec<MseSummary>,
}

impl MseReport {
    pub fn cell(&self, method: EstimatorKind, n: usize, x_index: usize, target: Target) -> Option<&MseCell> {
        let x = *self.eval_x.get(x_index)?;
        self.cells
            .iter()
            .find(|c| c.method == method && c.n == n && c.x == x && c.target == target)
    }

    pub fn summary(&self, method: EstimatorKind, n: usize, target: Target) -> Option<&MseSummary> {
        self.summaries
            .iter()
            .find(|s| s.method == method && s.n == n && s.target == target)
    }
}

/// Runs the whole study on the calling thread.
pub fn run_simulation(cfg: &SimConfig) -> core::result::Result<MseReport, Vec<ConfigIssue>> {
    let plan = SimPlan::new(cfg.clone())?;
    let by_size: Vec<Vec<Replication>> = (0..cfg.sample_sizes.len())
        .map(|si| (0..cfg.replications).map(|r| plan.replicate(si, r)).collect())
        .collect();
    plan.aggregate(&by_size)
        .map_err(|e| vec![ConfigIssue::new("sample_sizes", &alloc::format!("{e}"))])
}

/// Methods ordered by grid-averaged MSE (ascending), ties kept in canonical
/// method order.
pub fn rank_methods(report: &MseReport, n: usize, target: Target) -> Result<Vec<EstimatorKind>> {
    let mut rows: Vec<&MseSummary> = report
        .summaries
        .iter()
        .filter(|s| s.n == n && s.target == target)
        .collect();
    if rows.is_empty() {
        return Err(Error::domain("report does not cover this sample size", n as f64));
    }
    rows.sort_by_key(|s| s.method);
    rows.sort_by(|a, b| a.avg_mse.total_cmp(&b.avg_mse));
    Ok(rows.into_iter().map(|s| s.method).collect())
}
