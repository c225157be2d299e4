use std::fmt;

use thiserror::Error;

/// A single violated parameter constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {}", join_violations(.0))]
    Config(Vec<Violation>),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("population explosion: {size} individuals at generation {generation}")]
    Explosion { generation: u64, size: u64 },

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("phi = {phi} violates 1 < phi < kappa^(1/2q); largest admissible phi is {max_phi}")]
    PhiTooLarge { phi: f64, max_phi: f64 },

    #[error("empty trace")]
    EmptyTrace,

    #[error("gamma {0} is not tracked in this run record")]
    UntrackedGamma(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Whether the error stems from invalid input rather than a failure
    /// while computing.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::Domain(_)
                | Error::PhiTooLarge { .. }
                | Error::EmptyTrace
                | Error::UntrackedGamma(_)
                | Error::Json(_)
        )
    }

    pub(crate) fn config(field: &'static str, message: impl Into<String>) -> Self {
        Error::Config(vec![Violation {
            field,
            message: message.into(),
        }])
    }
}

pub type Result<T> = std::result::Result<T, Error>;
