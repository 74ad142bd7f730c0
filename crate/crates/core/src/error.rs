use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("rejected input: {0}")]
    RejectedInput(String),

    #[error("corrupt field: {0}")]
    CorruptField(String),

    #[error("numerical blowup: {0}")]
    Blowup(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("incomplete history: {0}")]
    IncompleteHistory(String),

    #[error("incomplete ledger: {0}")]
    IncompleteLedger(String),

    #[error("fit window error: {0}")]
    Window(String),

    #[error("unresolved quadrature: {0}")]
    Resolution(String),

    #[error("snapshot format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
