use thiserror::Error;

/// Errors shared across all modules.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// A path never exceeds the requested level.
    #[error("level never crossed: supremum {supremum} <= level {level}")]
    LevelNeverCrossed { level: f64, supremum: f64 },

    /// The realized step prefix does not reach the passage level.
    #[error("insufficient steps: partial sums reach {reached}, level is {level}")]
    InsufficientSteps { level: f64, reached: f64 },

    /// The subordinator does not cross the level inside its horizon.
    #[error("horizon too short: S(horizon) = {reached} <= level {level}")]
    HorizonTooShort { level: f64, reached: f64 },

    /// Evaluation requested past the simulated time window.
    #[error("beyond horizon: t = {t} > horizon {horizon}")]
    BeyondHorizon { t: f64, horizon: f64 },

    #[error("empty sample")]
    EmptySample,

    #[error("too few exceedances: found {found}, need {required}")]
    TooFewExceedances { found: usize, required: usize },

    #[error("degenerate binning: {0}")]
    DegenerateBinning(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
