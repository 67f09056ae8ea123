use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain {
        what: &'static str,
        value: f64,
    },
    /// An objective or integrand produced a non-finite value.
    Evaluation { at: f64 },
    /// The supplied interval does not bracket a sign change.
    Bracketing { lo: f64, hi: f64 },
    /// An iterative routine used up its evaluation budget.
    BudgetExhausted { evaluations: usize },
    /// Adaptive quadrature could not reach the requested tolerance.
    Quadrature { estimate: f64, error: f64 },
    /// A sample failed validation.
    InvalidSample(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "domain error: {what} (got {value})"),
            Error::Evaluation { at } => write!(f, "non-finite objective value at {at}"),
            Error::Bracketing { lo, hi } => {
                write!(f, "no sign change on bracket [{lo}, {hi}]")
            }
            Error::BudgetExhausted { evaluations } => {
                write!(f, "evaluation budget exhausted after {evaluations} evaluations")
            }
            Error::Quadrature { estimate, error } => write!(
                f,
                "quadrature did not converge (estimate {estimate}, error {error})"
            ),
            Error::InvalidSample(msg) => write!(f, "invalid sample: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::Domain { what, value }
    }

    /// True for failures caused by bad input rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Domain { .. } | Error::InvalidSample(_))
    }
}
