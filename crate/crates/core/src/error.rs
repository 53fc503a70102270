use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} = {value} out of range [{min}, {max}]")]
    Range {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },

    #[error("dimension error: expected {expected}, got {rows}x{cols}")]
    Dimension {
        expected: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("instance too large for exhaustive enumeration: {0}")]
    TooLarge(String),
}

impl Error {
    pub(crate) fn range(what: &'static str, value: i64, min: i64, max: i64) -> Self {
        Error::Range {
            what,
            value,
            min,
            max,
        }
    }
}
