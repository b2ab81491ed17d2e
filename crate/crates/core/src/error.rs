use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("unsupported dimension {0} (supported: 1..=6)")]
    BadDimension(usize),
    #[error("expected {expected} entries, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("entry {value} does not fit in {width} byte(s)")]
    WidthExceeded { value: i128, width: u8 },
    #[error("malformed key: {0}")]
    MalformedKey(String),
    #[error("box of (2*{h}+1)^{cells} matrices does not fit in 64 bits")]
    BoxTooLarge { h: u64, cells: usize },
    #[error("guard tripped: {what} needs {needed} units of work, limit is {limit}")]
    GuardTripped {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
    #[error("{0} is not a prime in [2, 2^31 - 1]")]
    NotPrime(u64),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("infeasible: rank {rank} exceeds min(k1, k2) = {cap}")]
    Infeasible { rank: usize, cap: usize },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for resource-limit errors (box/tuple guards and integer width).
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::GuardTripped { .. }
                | Error::BoxTooLarge { .. }
                | Error::Overflow
                | Error::WidthExceeded { .. }
        )
    }
}
