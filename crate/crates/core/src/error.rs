use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid modulus {modulus:#x} for degree {n}: {reason}")]
    InvalidModulus { n: u32, modulus: u64, reason: &'static str },

    #[error("invalid arguments: {0}")]
    InvalidArguments(String),

    #[error("invalid truth table: {0}")]
    InvalidTable(String),

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("invalid affine map: {0}")]
    InvalidAffine(String),

    #[error("size limit exceeded: {what} needs 2^{bits} work, limit is 2^{limit} (set DILLONLAB_MAX_BITS to override){hint}")]
    SizeLimit { what: &'static str, bits: u32, limit: u32, hint: &'static str },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("structural mismatch: {0}")]
    StructuralMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
