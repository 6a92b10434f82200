use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variable index {index} out of range for {count} variables")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("degenerate evaluation: {function} at {value}")]
    DegenerateEvaluation { function: String, value: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("syntax error at {line}:{col}: expected {expected}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
    },

    #[error("unbound name `{0}`")]
    UnboundName(String),

    #[error("wrong number of arguments for `{0}`")]
    Arity(String),

    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("induced metric is not positive definite at {point:?} (smallest eigenvalue {min_eigenvalue})")]
    NotSpacelike {
        point: Vec<f64>,
        min_eigenvalue: f64,
    },

    #[error("normal space is degenerate at {point:?}: {reason}")]
    DegenerateNormal { point: Vec<f64>, reason: String },

    #[error("umbilic point at {point:?} (e^(2 tau) = {e2tau})")]
    UmbilicPoint { point: Vec<f64>, e2tau: f64 },

    #[error("parameter `{param}` violates constraint {bound}")]
    ConstraintViolation { param: String, bound: String },

    #[error("no realization found (best residual {best_residual})")]
    NoRealization { best_residual: f64 },

    #[error("too many degenerate sample points: {dropped} of {total}")]
    TooManyDegeneratePoints { dropped: usize, total: usize },

    #[error("empty sampling domain")]
    EmptyDomain,

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Short machine-readable tag used by the JSON error object.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DegenerateEvaluation { .. } => "DegenerateEvaluation",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::Syntax { .. } => "SyntaxError",
            Error::UnboundName(_) => "UnboundName",
            Error::Arity(_) => "ArityError",
            Error::InvalidChart(_) => "InvalidChart",
            Error::NotSpacelike { .. } => "NotSpacelike",
            Error::DegenerateNormal { .. } => "DegenerateNormal",
            Error::UmbilicPoint { .. } => "UmbilicPoint",
            Error::ConstraintViolation { .. } => "ConstraintViolation",
            Error::NoRealization { .. } => "NoRealization",
            Error::TooManyDegeneratePoints { .. } => "TooManyDegeneratePoints",
            Error::EmptyDomain => "EmptyDomain",
            Error::Config(_) => "ConfigError",
        }
    }

    /// Errors that mark a single sample point as unusable rather than failing a run.
    /// A non-spacelike point is not one of them: the chart itself is invalid.
    pub fn is_pointwise_degeneracy(&self) -> bool {
        matches!(
            self,
            Error::UmbilicPoint { .. } | Error::DegenerateNormal { .. } | Error::DegenerateEvaluation { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
