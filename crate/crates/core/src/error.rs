use thiserror::Error;

use crate::report::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Tables or maps whose dimensions do not fit together.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("invalid group: {0}")]
    InvalidGroup(ValidationReport),

    #[error("invalid crossed module: {0}")]
    InvalidCrossedModule(ValidationReport),

    #[error("invalid twisting: {0}")]
    InvalidTwisting(ValidationReport),

    #[error("invalid cocycle: {0}")]
    InvalidCocycle(ValidationReport),

    #[error("subgroup is not normal: {0}")]
    NotNormal(String),

    #[error("group {0} is not abelian")]
    NotAbelian(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("search budget of {limit} exceeded while {what}")]
    Budget { what: String, limit: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("missing data: {0}")]
    MissingData(String),

    /// A construction produced an object that fails its own axioms; this
    /// always points at a transcription bug rather than bad input.
    #[error("construction produced an invalid result: {0}")]
    Transcription(String),

    #[error("finite-difference step {step} is too large for grid spacing {spacing}")]
    StepTooLarge { step: f64, spacing: f64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn budget(what: impl Into<String>, limit: u64) -> Self {
        Error::Budget {
            what: what.into(),
            limit,
        }
    }
}
