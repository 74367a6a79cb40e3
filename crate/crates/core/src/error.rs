use thiserror::Error;

/// Errors raised by the analysis library.
///
/// The variants are coarse on purpose: callers (the CLI in particular) map
/// them onto exit codes, so the distinction that matters is *which stage*
/// rejected the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition on an argument was violated (non-prime `ell`, zero polynomial, ...).
    #[error("invalid argument: {0}")]
    Argument(String),
    /// The input is structurally valid but too degenerate to analyze (e.g. `f` constant).
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// The curve model failed validation (reducible factor, shared roots, overflow).
    #[error("model validation failed: {0}")]
    Validation(String),
    /// The operation is undefined for this model (e.g. a geometrically reducible curve).
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(format!($($arg)*)))
    };
}
pub(crate) use bail;
