use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    /// Exact integer result does not fit in 128 bits.
    #[error("integer overflow computing {0}")]
    Overflow(String),

    /// A Fock expansion lost more probability than allowed.
    #[error("truncation at n_max = {n_max} leaves tail mass {tail:e}")]
    Truncation { n_max: usize, tail: f64 },

    /// Two elements of an index set cannot be paired.
    #[error("inadmissible index pair {first} + {second}: {reason}")]
    Inadmissible {
        first: String,
        second: String,
        reason: String,
    },

    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
