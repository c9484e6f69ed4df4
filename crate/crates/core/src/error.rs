use thiserror::Error;

/// Errors raised by the simulator and its numerical kernels.
#[derive(Debug, Error)]
pub enum Error {
    /// A register would exceed the configured qubit cap.
    #[error("size error: {0}")]
    Size(String),

    /// An argument lies outside the operation's domain.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A numerical precondition (Hermiticity, reality of an expectation, ...) failed.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Relative entropy requested with `supp(rho)` not contained in `supp(sigma)`.
    #[error("support error: {0}")]
    Support(String),

    /// Configuration could not be parsed or failed validation.
    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status for the command-line front end: 2 for bad
    /// configuration or arguments, 3 for size caps, 4 for I/O, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Argument(_) => 2,
            Error::Size(_) => 3,
            Error::Io { .. } => 4,
            Error::Contract(_) | Error::Support(_) => 1,
        }
    }
}
