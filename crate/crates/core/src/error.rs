use thiserror::Error;

/// Errors raised by the library entry points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("({residues:?}, {period}) is not a common complement: fiber {fiber:?} on cell {cell} does not tile")]
    NotACommonComplement {
        cell: String,
        fiber: Vec<i64>,
        residues: Vec<i64>,
        period: u64,
    },

    #[error("invalid family: member #{index} {set:?} is not a spectrum of the given base set")]
    InvalidFamily { index: usize, set: Vec<i64> },

    #[error("cannot parse {field}: {reason}")]
    Parse { field: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
