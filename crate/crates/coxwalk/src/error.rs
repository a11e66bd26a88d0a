use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),

    #[error("2cos(pi/{m}) is not in the field of conductor {conductor}")]
    NotInField { m: u32, conductor: u32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown generator label {0:?}")]
    UnknownGenerator(String),

    #[error("word {0:?} is not reduced")]
    NotReduced(String),

    #[error("minimal-root closure exceeded the cap of {0} roots")]
    RootCap(usize),

    #[error("appendix construction does not cover this system: {0}")]
    UnsupportedClass(String),

    #[error("appendix rules did not close: {0}")]
    AppendixRules(String),

    #[error("thickness constraint violated: {0}")]
    Thickness(String),

    #[error("invalid walk specification: {0}")]
    InvalidWalk(String),

    #[error("computation cap exceeded: {0}")]
    CapExceeded(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("kernel computations disagree at {0}")]
    KernelMismatch(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("{0} is not Fuchsian; the speed and CLT theory assumes a Fuchsian system (pass --allow-non-fuchsian to run anyway)")]
    NotFuchsian(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: validation errors and computation caps are kept distinct.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded(_) | Error::RootCap(_) | Error::SearchExhausted(_) => 3,
            Error::KernelMismatch(_) | Error::AppendixRules(_) => 4,
            Error::Io(_) | Error::Json(_) => 5,
            Error::InsufficientData(_) => 6,
            _ => 2,
        }
    }
}
