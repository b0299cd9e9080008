use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-generic objective: {0}")]
    NonGeneric(String),

    #[error("orientation contains a directed cycle through vertex {0}")]
    Cyclic(usize),

    #[error("singular matrix")]
    SingularMatrix,

    #[error("dimension {d} exceeds the limit of {max}")]
    DimensionTooLarge { d: usize, max: usize },

    #[error("enumeration guard exceeded: estimated {estimate} > {limit}")]
    GuardExceeded { estimate: f64, limit: f64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("{0}")]
    Domain(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable tag, used as `error:<kind>:` by the command line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonGeneric(_) => "non-generic",
            Error::Cyclic(_) => "cyclic",
            Error::SingularMatrix => "singular-matrix",
            Error::DimensionTooLarge { .. } => "dimension-too-large",
            Error::GuardExceeded { .. } => "guard-exceeded",
            Error::Parse { .. } => "parse",
            Error::InvariantViolation(_) => "invariant-violation",
            Error::Domain(_) => "domain",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
