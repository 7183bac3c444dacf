use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    /// An evaluation hit `f(p, beta) = 0` or `[p_ij] = 0`.
    #[error("dynamical pole: {0}")]
    DynamicalPole(String),
    #[error("degenerate beta chain: {0}")]
    DegenerateBeta(String),
    #[error("pi undefined: beta_{0}{1} = 0")]
    PiUndefined(usize, usize),
    #[error("vanishing q-integer [{0}]")]
    VanishingQInteger(i64),
    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),
    #[error("missing q^(1/n) root in context")]
    MissingRoot,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("singular operator: {0}")]
    Singular(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// A rewrite move could not be applied to an expression.
    #[error("move {index} ({kind}) failed: {reason}")]
    MoveFailed {
        index: usize,
        kind: String,
        reason: String,
    },
    #[error("missing certificate: {0} must be replayed first")]
    MissingCertificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Usage and pole errors map to exit code 2 in the CLI.
    pub fn is_pole(&self) -> bool {
        matches!(self, Error::DynamicalPole(_) | Error::VanishingQInteger(_))
    }
}
