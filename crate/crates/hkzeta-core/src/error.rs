use alloc::string::String;
use core::fmt;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument outside the domain of the operation (zero inverse, empty sup, ...).
    Domain(String),
    /// Malformed textual input.
    Parse(String),
    /// Curve data does not contain what the computation needs.
    MissingData(String),
    /// The request is well formed but outside what the library handles.
    Unsupported(String),
    /// The line bundle is not big, so the height zeta function has no finite abscissa.
    NotBig { gamma: i64, xi: i64 },
    /// A series or special value was requested where it diverges.
    Divergent(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
            Error::MissingData(m) => write!(f, "missing curve data: {m}"),
            Error::Unsupported(m) => write!(f, "unsupported: {m}"),
            Error::NotBig { gamma, xi } => write!(
                f,
                "line bundle ({gamma},{xi}) is not big: need gamma > 0 and xi > -gamma*a_r"
            ),
            Error::Divergent(m) => write!(f, "divergent: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}
