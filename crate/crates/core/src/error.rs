use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A validity guard of a discretization or channel was violated.
    #[error("guard violated: {0}")]
    Guard(String),

    /// An iterative procedure did not reach its tolerance.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// A root search found no sign change in its bracket.
    #[error("no bracket: {0}")]
    NoBracket(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn guard(msg: impl Into<String>) -> Self {
        Error::Guard(msg.into())
    }

    /// True for errors caused by invalid inputs rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Guard(_))
    }
}
