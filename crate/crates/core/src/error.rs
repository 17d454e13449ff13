use thiserror::Error;

/// Failure modes of the solver, its diagnostics and the scenario loader.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("breakpoints must be strictly increasing (segment {index})")]
    NonIncreasingBreakpoints { index: usize },

    #[error("negative density {value} in segment {index}")]
    NegativeDensity { index: usize, value: f64 },

    #[error("boundary velocity must be positive, got {value} in segment {index}")]
    NonPositiveBoundaryVelocity { index: usize, value: f64 },

    #[error("non-finite value in segment {index}")]
    NonFinite { index: usize },

    #[error("profile must end with an unbounded segment")]
    MissingTail,

    #[error("profile has no segments")]
    EmptyProfile,

    #[error("argument {name} must be non-negative, got {value}")]
    NegativeArgument { name: &'static str, value: f64 },

    #[error("argument {name} is out of range: {value}")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("velocity is undefined at t = 0 (rarefaction center)")]
    UndefinedAtRarefactionCenter,

    #[error("quadrature did not converge (estimated error {estimate:e})")]
    QuadratureNotConverged { estimate: f64 },

    #[error("exceptional point: the foot maps onto the interval [{lo}, {hi}]")]
    ExceptionalPoint { lo: f64, hi: f64 },

    #[error("scan window too coarse: {reason}")]
    WindowTooCoarse { reason: String },

    #[error("shock path lost at t = {t}")]
    PathLost { t: f64 },

    #[error("initial data is not compactly supported up to the floor inside x <= {x_max}")]
    NonCompactScenario { x_max: f64 },

    #[error("event queue exceeded {limit} events")]
    EventQueueOverflow { limit: usize },

    #[error("scenario schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("unknown scenario {name:?}")]
    UnknownScenario { name: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by malformed input data rather than numerics.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::NonIncreasingBreakpoints { .. }
                | Error::NegativeDensity { .. }
                | Error::NonPositiveBoundaryVelocity { .. }
                | Error::NonFinite { .. }
                | Error::MissingTail
                | Error::EmptyProfile
                | Error::NegativeArgument { .. }
                | Error::OutOfRange { .. }
                | Error::Schema { .. }
                | Error::UnknownScenario { .. }
                | Error::NonCompactScenario { .. }
                | Error::Io(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
