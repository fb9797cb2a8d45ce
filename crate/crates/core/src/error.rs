use thiserror::Error;

/// Errors raised by the qcp library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("Jacobi eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("local dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid Pauli index ({p}, {q}) for d = {d}")]
    InvalidIndex { p: usize, q: usize, d: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("not a state: reconstructed matrix has eigenvalue {0:.3e}")]
    NotAState(f64),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("channel is non-unital; use check_cp_choi")]
    NonUnital,

    #[error("not CP, no Kraus form (Choi eigenvalue {0:.3e})")]
    NotCp(f64),

    #[error("invalid bracket: {0}")]
    InvalidBracket(String),

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Short machine-readable code for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotHermitian(_) => "not_hermitian",
            Error::NoConvergence(_) => "no_convergence",
            Error::InvalidDimension(_) => "invalid_dimension",
            Error::InvalidMatrix(_) => "invalid_matrix",
            Error::InvalidIndex { .. } => "invalid_index",
            Error::InvalidState(_) => "invalid_state",
            Error::NotAState(_) => "not_a_state",
            Error::InvalidChannel(_) => "invalid_channel",
            Error::NonUnital => "non_unital",
            Error::NotCp(_) => "not_cp",
            Error::InvalidBracket(_) => "invalid_bracket",
            Error::InvalidDirection(_) => "invalid_direction",
            Error::Unsupported(_) => "unsupported",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
