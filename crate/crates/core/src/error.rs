use num_bigint::BigUint;
use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// The CLI maps these onto its exit codes through [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("wrong regime: {0}")]
    WrongRegime(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("precision unreachable: {reason}; best achievable radius {achievable}")]
    PrecisionUnreachable { reason: String, achievable: String },

    #[error("comparison undecided at n = {n} after escalating to {precision} bits")]
    Undecided { n: u64, precision: u32 },

    #[error("partial factorization of {n}: unfactored composite cofactor {cofactor}")]
    PartialFactorization {
        n: BigUint,
        found: Vec<(BigUint, u32)>,
        cofactor: BigUint,
    },

    #[error("search budget exhausted: {0}")]
    Budget(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("verification mismatch: {0}")]
    Verification(String),

    #[error("invalid input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Undecided { .. } => 3,
            Error::Budget(_) | Error::PartialFactorization { .. } => 4,
            Error::Verification(_) => 5,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}
