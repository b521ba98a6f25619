use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("`{token}`: {message}")]
    Semantic { token: String, message: String },

    #[error("not admissible: {0}")]
    NotAdmissible(String),

    #[error("completion cap exceeded after {0} rounds")]
    CompletionCap(usize),

    #[error("completion grew past {0} elements")]
    CompletionSize(usize),

    #[error("tip of zero")]
    TipOfZero,

    #[error("certificate failure: {0}")]
    Certificate(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. } | Error::Semantic { .. } => 2,
            Error::NotAdmissible(_) | Error::CompletionCap(_) | Error::CompletionSize(_) => 3,
            Error::Certificate(_) => 4,
            Error::Invariant(_) | Error::TipOfZero => 5,
            Error::InvalidArgument(_) | Error::Io(_) => 1,
        }
    }

    /// Stable machine-readable kind for JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::Semantic { .. } => "semantic",
            Error::NotAdmissible(_) => "not_admissible",
            Error::CompletionCap(_) => "completion_cap",
            Error::CompletionSize(_) => "completion_size",
            Error::TipOfZero => "tip_of_zero",
            Error::Certificate(_) => "certificate",
            Error::Invariant(_) => "invariant",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Io(_) => "io",
        }
    }
}
