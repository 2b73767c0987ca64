use thiserror::Error;

/// Domain errors for construction and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("scale must be finite and strictly positive, got {0}")]
    InvalidScale(f64),

    #[error("location must be finite, got {0}")]
    InvalidLocation(f64),

    #[error("NaN is outside the function domain")]
    NanInput,

    #[error("probability must lie in the open interval (0, 1), got {0}")]
    ProbabilityOutOfRange(f64),

    #[error("value must lie in the closed unit interval, got {0}")]
    UnitIntervalViolation(f64),

    #[error("correlation must lie in [-1, 1], got {0}")]
    InvalidCorrelation(f64),

    #[error("{family} parameter out of range: got {value}, require {constraint}")]
    InvalidCopulaParameter {
        family: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("grid must be non-empty")]
    EmptyGrid,

    #[error("grid must be finite and strictly increasing")]
    InvalidGrid,

    #[error("step must be finite and strictly positive, got {0}")]
    InvalidStep(f64),

    #[error("no isolated critical point: the objective is constant at z = mu_x + mu_y")]
    DegenerateCriticalPoints,

    #[error("sample count must be at least {min}, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("confidence parameter must lie in (0, 1), got {0}")]
    InvalidConfidence(f64),

    #[error("samples must be finite and non-empty")]
    InvalidSamples,
}

pub type Result<T> = std::result::Result<T, Error>;
