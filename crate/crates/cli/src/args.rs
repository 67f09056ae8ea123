use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lindley_core::estimators::EstimatorKind;
use lindley_core::risk::{RiskEstimator, Target};

#[derive(Debug, Parser)]
#[command(name = "lindley-est", version, about = "Estimate the density and distribution function of the Lindley distribution")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit θ to an observation file.
    Fit(FitArgs),
    /// Draw a seeded Lindley sample.
    Sample(SampleArgs),
    /// Run a Monte Carlo bias/MSE study from a config file.
    Simulate(SimulateArgs),
    /// Exact bias and MSE of the MLE plug-in or UMVUE estimator.
    Risk(RiskArgs),
    /// Tabulate an estimated pdf and cdf on a grid.
    Curve(CurveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// One estimator or all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodSelection {
    All,
    One(EstimatorKind),
}

fn parse_method(s: &str) -> Result<EstimatorKind, String> {
    s.parse().map_err(|_| {
        let names: Vec<_> = EstimatorKind::ALL.iter().map(|k| k.name()).collect();
        format!("unknown method {s:?}, expected one of {}", names.join(", "))
    })
}

fn parse_selection(s: &str) -> Result<MethodSelection, String> {
    if s.eq_ignore_ascii_case("all") {
        Ok(MethodSelection::All)
    } else {
        parse_method(s).map(MethodSelection::One)
    }
}

fn parse_risk_estimator(s: &str) -> Result<RiskEstimator, String> {
    match s.to_ascii_lowercase().replace('_', "-").as_str() {
        "mle-plugin" | "mle" => Ok(RiskEstimator::MlePlugin),
        "umvue" => Ok(RiskEstimator::Umvue),
        _ => Err(format!("unknown estimator {s:?}, expected MLE_PLUGIN or UMVUE")),
    }
}

fn parse_sample_size(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("sample size must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(_) => Err(format!("{s:?} is not a non-negative integer")),
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TargetArg {
    Pdf,
    Cdf,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Pdf => Target::Pdf,
            TargetArg::Cdf => Target::Cdf,
        }
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Observation file: one positive value per line, '#' for comments.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Estimator name or "all".
    #[arg(long, default_value = "all", value_parser = parse_selection)]
    pub method: MethodSelection,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_parser = parse_sample_size)]
    pub n: u64,
    #[arg(long)]
    pub theta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// JSON simulation config.
    #[arg(long, short)]
    pub config: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RiskArgs {
    #[arg(long)]
    pub x: f64,
    #[arg(long)]
    pub theta: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub target: TargetArg,
    /// MLE_PLUGIN or UMVUE.
    #[arg(long, default_value = "MLE_PLUGIN", value_parser = parse_risk_estimator)]
    pub estimator: RiskEstimator,
    /// Weight the MLE integrand by |dθ̂/dt| (not a risk; kept for comparison).
    #[arg(long)]
    pub jacobian: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, default_value = "MLE", value_parser = parse_method)]
    pub method: EstimatorKind,
    /// "start:stop:count" for an even grid, or a comma-separated list.
    #[arg(long)]
    pub grid: String,
    /// Add the true pdf and cdf under this θ.
    #[arg(long)]
    pub theta0: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn selections() {
        assert_eq!(parse_selection("ALL").unwrap(), MethodSelection::All);
        assert_eq!(parse_selection("cvme").unwrap(), MethodSelection::One(EstimatorKind::Cvme));
        assert!(parse_selection("bayes").is_err());
        assert_eq!(parse_risk_estimator("mle_plugin").unwrap(), RiskEstimator::MlePlugin);
        assert_eq!(parse_risk_estimator("UMVUE").unwrap(), RiskEstimator::Umvue);
    }
}
