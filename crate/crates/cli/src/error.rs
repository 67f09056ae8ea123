use std::fmt::Write as _;
use std::path::PathBuf;

use lindley_core::simulation::ConfigIssue;

/// Exit status for failures caused by numerics.
pub const EXIT_NUMERICAL: i32 = 1;
/// Exit status for rejected input.
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:{line}: {message}", path.display())]
    Data {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("{}", schema_message(.0))]
    Schema(Vec<ConfigIssue>),
    #[error("{0}")]
    Core(#[from] lindley_core::Error),
    #[error("{method}: {source}")]
    Method {
        method: lindley_core::estimators::EstimatorKind,
        source: lindley_core::Error,
    },
    #[error("cannot serialize output: {0}")]
    Serialize(#[from] serde_json::Error),
}

fn schema_message(issues: &[ConfigIssue]) -> String {
    let mut s = String::from("invalid simulation config:");
    for i in issues {
        let _ = write!(s, "\n  {}: {}", i.field, i.message);
    }
    s
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) | CliError::Method { source: e, .. } if !e.is_validation() => {
                EXIT_NUMERICAL
            }
            CliError::Serialize(_) | CliError::Write { .. } => EXIT_NUMERICAL,
            _ => EXIT_VALIDATION,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
