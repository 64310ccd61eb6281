use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("denominator vanishes identically after substitution")]
    DenominatorVanishes,

    /// A symbolic sign could not be decided for arbitrarily large parameters.
    #[error("mixed generic sign: {0}")]
    MixedSign(String),

    /// A mathematical invariant of the pipeline was violated.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("duplicate interpolation node in coordinate {0}")]
    DuplicateNode(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn inconsistency(msg: impl Into<String>) -> Self {
        Error::InternalInconsistency(msg.into())
    }

    /// True for errors that signal a broken mathematical invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::InternalInconsistency(_) | Error::MixedSign(_) | Error::DenominatorVanishes
        )
    }
}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
