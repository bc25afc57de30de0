use thiserror::Error;

use crate::ams::DeltaViolation;

/// Errors raised by the library. Each variant maps onto one CLI exit code,
/// see [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid delta-sequence: {}", format_violations(.0))]
    InvalidDelta(Vec<DeltaViolation>),

    /// A claim the algorithms rely on did not hold for this input
    /// (for instance two negative excesses in step 1 of the staged bound).
    #[error("assumption violated: {0}")]
    AssumptionViolation(String),

    /// The emptiness test of the nef reduction disagreed with the exact
    /// cone-coordinate test.
    #[error("emptiness test disagrees with cone coordinates: reduction says {reduction_empty}, cone says {cone_empty} (class {class})")]
    EmptinessDisagreement {
        reduction_empty: bool,
        cone_empty: bool,
        class: String,
    },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("iteration cap exceeded in {0}")]
    IterationCap(&'static str),

    #[error("degenerate point sample (seed {seed}): {reason}")]
    DegenerateSample { seed: u64, reason: String },

    #[error("enumeration too large: {count} candidates exceeds limit {limit}")]
    EnumerationTooLarge { count: u128, limit: u128 },
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_)
            | Error::Parse(_)
            | Error::Precondition(_)
            | Error::InvalidDelta(_)
            | Error::EnumerationTooLarge { .. } => 1,
            Error::AssumptionViolation(_)
            | Error::EmptinessDisagreement { .. }
            | Error::IterationCap(_) => 2,
            Error::Overflow(_) => 3,
            Error::DegenerateSample { .. } => 4,
        }
    }
}

fn format_violations(v: &[DeltaViolation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
