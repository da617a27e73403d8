use thiserror::Error;

/// Failure categories shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands live in different spaces (homology or truncation mismatch).
    #[error("configuration error: {0}")]
    Config(String),
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// The operation is not defined for this surface signature.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    /// A series or iteration failed its convergence preconditions.
    #[error("convergence error: {0}")]
    Convergence(String),
    #[error("composition error: {0}")]
    Composition(String),
    /// Inputs do not satisfy the algebraic hypotheses of the requested computation.
    #[error("hypothesis check failed: {0}")]
    Hypothesis(String),
}

impl Error {
    /// Short machine-readable category name.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Config(_) => "configuration",
            Error::Domain(_) => "domain",
            Error::Parse(_) => "parse",
            Error::Unsupported(_) => "unsupported",
            Error::Convergence(_) => "convergence",
            Error::Composition(_) => "composition",
            Error::Hypothesis(_) => "hypothesis",
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Unsupported(_) | Error::Config(_) => 3,
            Error::Domain(_) | Error::Convergence(_) | Error::Composition(_) | Error::Hypothesis(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
