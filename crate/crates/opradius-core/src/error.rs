use thiserror::Error;

/// Errors surfaced by matrix kernels, inequality evaluators, and the
/// verification harness.
#[derive(Debug, Error)]
pub enum Error {
    /// Input was required to be Hermitian; the reported value is the
    /// Frobenius norm of `H - H*`.
    #[error("matrix is not Hermitian (asymmetry norm {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    /// Input was required to be positive semidefinite.
    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    /// An iterative kernel failed to reach its stopping criterion.
    #[error("numerical kernel failed to converge: {context}")]
    ConvergenceFailure { context: String },

    /// A scalar function was applied outside its domain, or an argument
    /// fell outside its documented range.
    #[error("domain error: {context}")]
    DomainError { context: String },

    /// Matrix or vector shapes are incompatible.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    /// A block operation needs a specific grid shape.
    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },

    #[error("tolerance must be positive and finite, got {tol:.3e}")]
    InvalidTolerance { tol: f64 },

    #[error("exponent must be positive, got {p}")]
    NonpositiveExponent { p: f64 },

    #[error("exponent {p} is below the required minimum {required}")]
    ExponentTooSmall { p: f64, required: f64 },

    /// The commutation hypothesis `|T|S = S*|T|` failed; the reported value
    /// is the Frobenius norm of the residual.
    #[error("commutation hypothesis violated (residual norm {residual:.3e})")]
    CommutationViolated { residual: f64 },

    /// A function pair does not satisfy `f(t) g(t) = t` on the spectrum.
    #[error("invalid function pair: f*g differs from identity by {max_defect:.3e} on the spectrum")]
    InvalidFunctionPair { max_defect: f64 },

    /// An ensemble or check specification is malformed.
    #[error("invalid specification: {context}")]
    InvalidSpec { context: String },

    #[error("unknown bound identifier `{bound_id}`")]
    UnknownBound { bound_id: String },

    /// The supplied ensemble cannot produce inputs satisfying the bound's
    /// hypotheses.
    #[error("hypothesis mismatch: {context}")]
    HypothesisMismatch { context: String },

    /// A stored counterexample fails to replay.
    #[error("corrupt counterexample payload: {context}")]
    CorruptPayload { context: String },
}

impl Error {
    pub fn domain(context: impl Into<String>) -> Self {
        Error::DomainError { context: context.into() }
    }

    pub fn dims(context: impl Into<String>) -> Self {
        Error::DimensionMismatch { context: context.into() }
    }

    pub fn spec(context: impl Into<String>) -> Self {
        Error::InvalidSpec { context: context.into() }
    }

    pub fn hypothesis(context: impl Into<String>) -> Self {
        Error::HypothesisMismatch { context: context.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
