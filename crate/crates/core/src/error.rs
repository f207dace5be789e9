use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("access to discarded table region: {0}")]
    OutOfStoredRegion(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that indicate a bug in the aligner rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_) | Error::OutOfStoredRegion(_))
    }

    /// Process exit code for the CLI: 1 for input/config errors, 2 for internal errors.
    pub fn exit_code(&self) -> i32 {
        if self.is_internal() {
            2
        } else {
            1
        }
    }
}
