use thiserror::Error;

/// Errors produced by the analysis library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty state")]
    EmptyState,

    #[error("expansion overflow: {required} binary terms required, cap is {cap}")]
    ExpansionOverflow { required: u128, cap: u64 },

    #[error("encoding cost overflow: C_K = 2^{exponent}, cap is {cap}")]
    EncodingCostOverflow { exponent: u32, cap: u64 },

    #[error("work budget exceeded: {required:.3e} operations requested, budget {budget:.3e}; use direct_trace for binary states")]
    WorkBudgetExceeded { required: f64, budget: f64 },

    #[error("length mismatch: expected {expected} qubits/modes, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for {len} qubits/modes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("duplicate determinant {0}")]
    DuplicateDeterminant(String),

    #[error("determinant {occupation} has {found} electrons, expected {expected}")]
    ParticleNumber {
        occupation: String,
        expected: usize,
        found: usize,
    },

    #[error("non-finite amplitude")]
    NonFinite,

    #[error("invalid mapping: {0}")]
    InvalidMapping(String),

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("matrix is not positive semi-definite (eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for errors raised because a configured size or work limit was hit.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::ExpansionOverflow { .. }
                | Error::EncodingCostOverflow { .. }
                | Error::WorkBudgetExceeded { .. }
        )
    }
}
