use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial division is not exact")]
    NonExact,

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("variable sets are not disjoint: {}", .0.join(", "))]
    VariableClash(Vec<String>),

    #[error("the base of a twisted power must be nonzero")]
    ZeroBase,

    #[error("operator parameter `s` does not match element parameter `{0}`")]
    ParameterMismatch(String),

    #[error("twisted powers have different bases or parameters")]
    BaseMismatch,

    #[error("suspension exponent must be at least 2, got {0}")]
    BadExponent(i64),

    #[error("`{poly}` is not weighted homogeneous of degree 1 for weights [{weights}]")]
    NotWeightedHomogeneous { poly: String, weights: String },

    #[error("composed certificate failed verification: {0}")]
    ComposeVerificationFailure(String),

    #[error("shortcut not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),

    #[error("factor `{0}` does not expose a rational root")]
    NonRationalRoot(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax { pos, msg: msg.into() }
    }

    /// Parse-level failures: bad grammar, undeclared names, irrational factors.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, Error::Syntax { .. } | Error::UndeclaredVariable(_) | Error::NonRationalRoot(_))
    }

    /// Failures that can only come from a bug, since the underlying identity is a theorem.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InternalInconsistency(_) | Error::ComposeVerificationFailure(_))
    }
}
