use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot parse `{input}` as a number: {reason}")]
    ParseNumber { input: String, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state vector is not normalized (norm squared = {norm_sqr})")]
    NotNormalized { norm_sqr: String },

    #[error("measurement basis is not orthonormal: {0}")]
    NotOrthonormal(String),

    #[error("unknown state name `{0}`")]
    UnknownState(String),

    #[error("ontic space must have at least one factor, each with at least one label")]
    EmptySpace,

    #[error("duplicate factor name `{0}`")]
    DuplicateFactor(String),

    #[error("duplicate label `{label}` in factor `{factor}`")]
    DuplicateLabel { factor: String, label: String },

    #[error("unknown factor `{0}`")]
    UnknownFactor(String),

    #[error("invalid point `{point}`: {reason}")]
    InvalidPoint { point: String, reason: String },

    #[error("duplicate point `{point}` in {context}")]
    DuplicatePoint { point: String, context: String },

    #[error("unknown preparation `{0}`")]
    UnknownPreparation(String),

    #[error("unknown measurement `{0}`")]
    UnknownMeasurement(String),

    #[error("duplicate label `{0}`")]
    DuplicateName(String),

    #[error("objects live on different ontic spaces")]
    SpaceMismatch,

    #[error("factor selection is empty")]
    EmptySelection,

    #[error("invalid factor selection: {0}")]
    InvalidSelection(String),

    #[error("outcome {outcome} out of range (measurement has {count} outcomes)")]
    OutcomeOutOfRange { outcome: usize, count: usize },

    #[error("sample count must be at least 1")]
    NoSamples,

    #[error("not normalized: {0}")]
    NotNormalizedTable(String),

    #[error("malformed synthesis spec: {0}")]
    MalformedSpec(String),

    #[error("model has no inaccessible factor")]
    NoInaccessibleFactor,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("io error on `{path}`: {message}")]
    Io { path: String, message: String },
}
