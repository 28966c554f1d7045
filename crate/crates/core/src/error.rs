use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("vector is not in the interior of the cone: {0}")]
    NotInterior(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("malformed template: {0}")]
    Template(String),

    #[error("range inclusion f(X) ⊆ g(X) failed: {0}")]
    RangeInclusion(String),

    #[error("invalid input: {0}")]
    Parse(String),

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
}

impl Error {
    pub(crate) fn dim(expected: usize, found: usize) -> Self {
        Error::Dimension { expected, found }
    }
}
