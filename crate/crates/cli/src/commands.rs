use std::path::{Path, PathBuf};
use std::time::Instant;

use lindley_core::distribution::{cdf, pdf, sample};
use lindley_core::estimators::{fit_theta, EstimatorKind};
use lindley_core::risk::{mle_risk_with, risk, RiskEstimator, RiskFormula, RiskQuery, RiskResult};
use lindley_core::simulation::MseSummary;
use lindley_core::{FittedCurve, LindleyParam, MseReport, Sample, SimConfig};
use serde::{Deserialize, Serialize};

use crate::args::{CurveArgs, FitArgs, Format, MethodSelection, RiskArgs, SampleArgs, SimulateArgs};
use crate::config::load_config;
use crate::data::read_sample;
use crate::error::{CliError, Result};
use crate::output::{emit, json, num, opt_num};
use crate::runner;

pub const UMVUE_NOTE: &str = "functional only, use curve";

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let wrap = |e: csv::Error| CliError::Invalid(format!("csv: {e}"));
    w.write_record(header).map_err(wrap)?;
    for row in rows {
        w.write_record(&row).map_err(wrap)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Invalid(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn with_method(method: EstimatorKind) -> impl FnOnce(lindley_core::Error) -> CliError {
    move |source| CliError::Method { method, source }
}

/// One row of `fit` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub method: EstimatorKind,
    pub n: usize,
    pub theta_hat: Option<f64>,
    pub objective: Option<f64>,
    pub evaluations: Option<usize>,
    pub converged: Option<bool>,
    pub note: Option<String>,
}

pub fn fit_records(s: &Sample, selection: MethodSelection) -> Result<Vec<FitRecord>> {
    let methods = match selection {
        MethodSelection::All => EstimatorKind::ALL.to_vec(),
        MethodSelection::One(k) => vec![k],
    };
    methods
        .into_iter()
        .map(|method| {
            if !method.estimates_theta() {
                return Ok(FitRecord {
                    method,
                    n: s.len(),
                    theta_hat: None,
                    objective: None,
                    evaluations: None,
                    converged: None,
                    note: Some(UMVUE_NOTE.into()),
                });
            }
            let est = fit_theta(method, s).map_err(with_method(method))?;
            Ok(FitRecord {
                method,
                n: s.len(),
                theta_hat: Some(est.theta_hat),
                objective: est.objective_value,
                evaluations: Some(est.evaluations),
                converged: Some(est.converged),
                note: None,
            })
        })
        .collect()
}

pub fn fit(args: &FitArgs) -> Result<()> {
    let s = read_sample(&args.input)?;
    let records = fit_records(&s, args.method)?;
    let text = match args.out.format {
        Format::Json => json(&records)?,
        Format::Csv => csv_string(
            &["method", "n", "theta_hat", "objective", "evaluations", "converged", "note"],
            records.iter().map(|r| {
                vec![
                    r.method.name().to_string(),
                    r.n.to_string(),
                    opt_num(r.theta_hat),
                    opt_num(r.objective),
                    r.evaluations.map(|e| e.to_string()).unwrap_or_default(),
                    r.converged.map(|c| c.to_string()).unwrap_or_default(),
                    r.note.clone().unwrap_or_default(),
                ]
            }),
        )?,
    };
    emit(args.out.output.as_deref(), &text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub n: u64,
    pub theta: f64,
    pub seed: u64,
    pub values: Vec<f64>,
}

pub fn sample_cmd(args: &SampleArgs) -> Result<()> {
    let p = LindleyParam::new(args.theta)?;
    let n = usize::try_from(args.n).map_err(|_| CliError::Invalid("sample size too large".into()))?;
    let s = sample(n, p, args.seed)?;
    let text = match args.out.format {
        Format::Json => json(&SampleRecord {
            n: args.n,
            theta: args.theta,
            seed: args.seed,
            values: s.values().to_vec(),
        })?,
        Format::Csv => {
            let mut t = format!("# Lindley sample n={} theta={} seed={}\n", args.n, num(args.theta), args.seed);
            for &x in s.values() {
                t.push_str(&num(x));
                t.push('\n');
            }
            t
        }
    };
    emit(args.out.output.as_deref(), &text)
}

/// Run information written next to the CSV table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationMetadata {
    pub tool: String,
    pub version: String,
    pub config: SimConfig,
    pub master_seed: u64,
    pub eval_x: Vec<f64>,
    pub threads: usize,
    pub wall_time_seconds: f64,
    pub summaries: Vec<MseSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationOutput {
    pub report: MseReport,
    pub metadata: SimulationMetadata,
}

/// Path of the metadata file that accompanies a CSV report.
pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

pub fn report_csv(report: &MseReport) -> Result<String> {
    csv_string(
        &["method", "n", "x", "target", "bias", "mse", "se"],
        report.cells.iter().map(|c| {
            vec![
                c.method.name().to_string(),
                c.n.to_string(),
                num(c.x),
                c.target.name().to_string(),
                num(c.bias),
                num(c.mse),
                num(c.se),
            ]
        }),
    )
}

pub fn simulate(args: &SimulateArgs, threads: usize) -> Result<()> {
    let cfg = load_config(&args.config)?;
    let started = Instant::now();
    let report = runner::run(cfg, threads)?;
    let metadata = SimulationMetadata {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: report.config.clone(),
        master_seed: report.config.master_seed,
        eval_x: report.eval_x.clone(),
        threads,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        summaries: report.summaries.clone(),
    };
    let out = args.out.output.as_deref();
    match args.out.format {
        Format::Json => emit(out, &json(&SimulationOutput { report, metadata })?),
        Format::Csv => {
            emit(out, &report_csv(&report)?)?;
            match out {
                Some(p) => emit(Some(&sidecar_path(p)), &json(&metadata)?),
                None => Ok(()),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskRecord {
    pub query: RiskQuery,
    pub with_jacobian: bool,
    pub result: RiskResult,
}

pub fn risk_cmd(args: &RiskArgs) -> Result<()> {
    let query = RiskQuery {
        x: args.x,
        theta: args.theta,
        n: args.n,
        target: args.target.into(),
        estimator: args.estimator,
    };
    let result = match (args.jacobian, args.estimator) {
        (false, _) => risk(&query)?,
        (true, RiskEstimator::MlePlugin) => mle_risk_with(&query, RiskFormula::WithJacobian)?,
        (true, RiskEstimator::Umvue) => {
            return Err(CliError::Invalid("--jacobian applies to the MLE plug-in only".into()));
        }
    };
    let text = match args.out.format {
        Format::Json => json(&RiskRecord {
            query,
            with_jacobian: args.jacobian,
            result,
        })?,
        Format::Csv => csv_string(
            &[
                "estimator",
                "target",
                "x",
                "theta",
                "n",
                "expectation",
                "bias",
                "mse",
                "quadrature_error",
                "truncation_point",
            ],
            [vec![
                query.estimator.name().to_string(),
                query.target.name().to_string(),
                num(query.x),
                num(query.theta),
                query.n.to_string(),
                num(result.expectation),
                num(result.bias),
                num(result.mse),
                num(result.quadrature_error_estimate),
                num(result.truncation_point),
            ]],
        )?,
    };
    emit(args.out.output.as_deref(), &text)
}

/// Parses `start:stop:count` or a comma-separated list of points.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| CliError::Invalid(format!("invalid grid {spec:?}: {why}"));
    let number = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("{:?} is not a number", s.trim())));
    let points = if spec.contains(':') {
        let parts: Vec<_> = spec.split(':').collect();
        let [a, b, k] = parts.as_slice() else {
            return Err(bad("expected start:stop:count"));
        };
        let (a, b) = (number(a)?, number(b)?);
        let k: usize = k.trim().parse().map_err(|_| bad("count must be a positive integer"))?;
        match k {
            0 => return Err(bad("count must be a positive integer")),
            1 => vec![a],
            _ => (0..k).map(|i| a + (b - a) * i as f64 / (k - 1) as f64).collect(),
        }
    } else {
        spec.split(',').map(number).collect::<Result<Vec<_>>>()?
    };
    if points.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(bad("points must be finite and non-negative"));
    }
    Ok(points)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub x: f64,
    pub pdf: f64,
    pub cdf: f64,
    pub pdf_true: Option<f64>,
    pub cdf_true: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub method: EstimatorKind,
    pub n: usize,
    /// Fitted θ for plug-in methods.
    pub theta_hat: Option<f64>,
    /// Sample sum for UMVUE.
    pub t: Option<f64>,
    pub theta0: Option<f64>,
    pub points: Vec<CurveRow>,
}

pub fn curve_record(s: &Sample, method: EstimatorKind, grid: &[f64], theta0: Option<f64>) -> Result<CurveRecord> {
    let truth = theta0.map(LindleyParam::new).transpose()?;
    let fitted = FittedCurve::fit(method, s).map_err(with_method(method))?;
    let (theta_hat, t) = match &fitted {
        FittedCurve::Plugin(est) => (Some(est.theta_hat), None),
        FittedCurve::Umvue(ctx) => (None, Some(ctx.t())),
    };
    let points = grid
        .iter()
        .map(|&x| {
            Ok(CurveRow {
                x,
                pdf: fitted.pdf(x)?,
                cdf: fitted.cdf(x)?,
                pdf_true: truth.map(|p| pdf(x, p)).transpose()?,
                cdf_true: truth.map(|p| cdf(x, p)).transpose()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveRecord {
        method,
        n: s.len(),
        theta_hat,
        t,
        theta0,
        points,
    })
}

pub fn curve(args: &CurveArgs) -> Result<()> {
    let grid = parse_grid(&args.grid)?;
    let s = read_sample(&args.input)?;
    let rec = curve_record(&s, args.method, &grid, args.theta0)?;
    let text = match args.out.format {
        Format::Json => json(&rec)?,
        Format::Csv => {
            let mut header = vec!["x", "pdf", "cdf"];
            if rec.theta0.is_some() {
                header.extend(["pdf_true", "cdf_true"]);
            }
            csv_string(
                &header,
                rec.points.iter().map(|r| {
                    let mut row = vec![num(r.x), num(r.pdf), num(r.cdf)];
                    if let (Some(p), Some(c)) = (r.pdf_true, r.cdf_true) {
                        row.extend([num(p), num(c)]);
                    }
                    row
                }),
            )?
        }
    };
    emit(args.out.output.as_deref(), &text)
}
