use alloc::string::String;
use core::fmt;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two operands disagree on a dimension.
    DimensionMismatch { what: &'static str, expected: usize, found: usize },
    /// A view index that the model does not know about.
    UnknownView(usize),
    /// The same view appeared twice in a joint encoding.
    DuplicateView(usize),
    /// An operation received no input where at least one was needed.
    Empty(&'static str),
    /// A value violates a documented precondition.
    InvalidArgument(String),
    /// The configuration cannot be trained or evaluated as given.
    Config(String),
    /// A gradient or update produced NaN or infinity.
    NonFinite { tensor: String },
    /// Token not present in a vocabulary.
    OutOfVocabulary(String),
    /// The model container could not be decoded.
    Format(FormatError),
}

/// Decoding failures for the binary model container.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormatError {
    BadMagic([u8; 4]),
    VersionMismatch { expected: u32, found: u32 },
    Truncated { offset: usize, needed: usize },
    Invalid(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { what, expected, found } => {
                write!(f, "dimension mismatch in {what}: expected {expected}, found {found}")
            }
            Error::UnknownView(id) => write!(f, "unknown view id {id}"),
            Error::DuplicateView(id) => write!(f, "view id {id} given more than once"),
            Error::Empty(what) => write!(f, "{what} must not be empty"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::NonFinite { tensor } => write!(f, "non-finite gradient in tensor {tensor}"),
            Error::OutOfVocabulary(tok) => write!(f, "token {tok:?} is not in the vocabulary"),
            Error::Format(e) => write!(f, "model format: {e}"),
        }
    }
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::BadMagic(m) => write!(f, "bad magic {m:?}"),
            FormatError::VersionMismatch { expected, found } => {
                write!(f, "version mismatch: expected {expected}, found {found}")
            }
            FormatError::Truncated { offset, needed } => {
                write!(f, "truncated payload: needed {needed} bytes at offset {offset}")
            }
            FormatError::Invalid(msg) => write!(f, "invalid payload: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
impl core::error::Error for FormatError {}

impl From<FormatError> for Error {
    fn from(e: FormatError) -> Self {
        Error::Format(e)
    }
}

pub(crate) fn check_dim(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { what, expected, found })
    }
}
