use thiserror::Error;

/// Errors raised anywhere in the simulator, verifier, or spec-file layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside its valid range (qubit label, basis index, size mismatch).
    #[error("domain error: {0}")]
    Domain(String),

    /// A size or precision guard tripped (coefficient width, dense matrix size, state size).
    #[error("resource guard: {0}")]
    Resource(String),

    /// A black-box handle was used out of protocol (e.g. a stale handle passed to a run).
    #[error("protocol error: {0}")]
    Protocol(String),

    /// Malformed oracle spec text.
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// Well-formed oracle spec text whose content violates an oracle invariant.
    #[error("line {line}: {message}")]
    Invariant { line: usize, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    /// Process exit code for this error class.
    ///
    /// `2` usage or parse error, `3` invariant violation in input, `4` resource guard.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Domain(_) | Error::Syntax { .. } | Error::Protocol(_) => 2,
            Error::Invariant { .. } => 3,
            Error::Resource(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
