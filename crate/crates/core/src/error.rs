use thiserror::Error;

/// Errors raised by the algebraic operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("basis element `{0}` has no image under the given map")]
    UnmappedBasisElement(String),

    #[error("element `{0}` lies outside the algebra carrier")]
    ElementOutsideCarrier(String),

    #[error("input set is not convex: {0}")]
    NonConvexInput(String),

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("resource limit exceeded: {what} (limit {limit})")]
    ResourceLimit { what: String, limit: u64 },

    #[error("variable `{0}` is not in the declared basis")]
    VariableNotInBasis(String),

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("invalid literal `{0}`")]
    InvalidLiteral(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub(crate) fn resource(what: impl Into<String>, limit: u64) -> Self {
        Error::ResourceLimit {
            what: what.into(),
            limit,
        }
    }
}
