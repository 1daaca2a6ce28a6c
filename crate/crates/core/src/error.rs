use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("time {t} outside [0, {horizon}]")]
    OutOfRange { t: f64, horizon: f64 },

    #[error("state vectors have different server counts ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{count} serving packets exceed {m} servers")]
    TooManyServing { count: usize, m: usize },

    #[error("policy {policy} produced an invalid action: {reason}")]
    PolicyViolation { policy: String, reason: String },

    #[error("simulation exceeded the safety cap of {cap} events")]
    Nonconvergence { cap: u64 },

    #[error("lemma precondition violated: {0}")]
    Precondition(String),

    #[error("unknown policy `{0}`")]
    UnknownPolicy(String),

    #[error("{0} is undefined for this input")]
    Undefined(&'static str),

    #[error("trace file line {line}: {reason}")]
    TraceFile { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
