use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse {token:?} as a rational: {reason}")]
    Parse { token: String, reason: &'static str },

    #[error("slope is undefined between points sharing x = {x}")]
    DegenerateSlope { x: String },

    /// A particle system (or other input) violates its structural invariants.
    #[error("invalid input: {0}")]
    Validation(String),

    /// Arguments outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Exhaustive routines refuse inputs past their tractability limit.
    #[error("{what} = {value} exceeds the limit of {limit}")]
    Guard {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("particle index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
