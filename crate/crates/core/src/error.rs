use thiserror::Error;

/// Errors produced by state handling, entropy evaluation and the constructions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("system has no parties")]
    EmptySystem,

    #[error("subset must be nonempty")]
    EmptySubset,

    #[error("subset bits {bits:#b} out of range for {n} parties")]
    SubsetOutOfRange { bits: u64, n: usize },

    #[error("invalid subset label `{0}`")]
    InvalidSubsetLabel(String),

    #[error("invalid Rényi order `{0}`")]
    InvalidOrder(String),

    #[error("order {order} is not supported by {operation}")]
    UnsupportedOrder { order: String, operation: &'static str },

    #[error("weights not normalized: total {total}")]
    NotNormalized { total: f64 },

    #[error("negative or non-finite weight {0}")]
    InvalidWeight(f64),

    #[error("empty spectrum")]
    EmptySpectrum,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("dense path is limited to total dimension {limit}, got {requested}")]
    DenseTooLarge { limit: usize, requested: u128 },

    #[error("alphabet too small: t = {t} > 1; need alphabet product of at least {minimum}")]
    AlphabetTooSmall { t: f64, minimum: u128 },

    #[error("explicit state exceeds budget: {0}")]
    BudgetExceeded(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("entropy of supplied distribution is {actual} bits, expected {target}")]
    EntropyMismatch { target: f64, actual: f64 },

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("eigenvalue solver did not converge on a {0}x{0} block")]
    EigenFailure(usize),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptySystem => "empty_system",
            Error::EmptySubset => "empty_subset",
            Error::SubsetOutOfRange { .. } => "subset_out_of_range",
            Error::InvalidSubsetLabel(_) => "invalid_subset_label",
            Error::InvalidOrder(_) => "invalid_order",
            Error::UnsupportedOrder { .. } => "unsupported_order",
            Error::NotNormalized { .. } => "not_normalized",
            Error::InvalidWeight(_) => "invalid_weight",
            Error::EmptySpectrum => "empty_spectrum",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NotHermitian(_) => "not_hermitian",
            Error::NotPositive(_) => "not_positive",
            Error::IndexOutOfRange(_) => "index_out_of_range",
            Error::DenseTooLarge { .. } => "dense_too_large",
            Error::AlphabetTooSmall { .. } => "alphabet_too_small",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::EntropyMismatch { .. } => "entropy_mismatch",
            Error::Overflow(_) => "overflow",
            Error::Unsupported(_) => "unsupported",
            Error::EigenFailure(_) => "eigen_failure",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
