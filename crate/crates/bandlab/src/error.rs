use thiserror::Error;

/// Crate-wide error type. Every fallible public operation returns one of
/// these; the CLI maps them onto process exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed graph/ordering/set input, or an operation precondition
    /// that the caller violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A permutation that is not a bijection onto 1..=n, or one whose
    /// domain does not match the graph it is paired with.
    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),

    /// Text that does not conform to the expected wire format.
    #[error("parse error: {0}")]
    Parse(String),

    /// An instance rejected up front because a required integrality or
    /// size condition fails (e.g. item sum not divisible by bin count).
    #[error("trivial instance: {0}")]
    TrivialInstance(String),

    /// A configured search budget (nodes, states, enumeration size, wall
    /// clock) was exhausted before an answer was established.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// An internal invariant failed. Always a bug.
    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI uses for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceLimit(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
