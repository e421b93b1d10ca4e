use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: expected {expected}, found {found}")]
    GridMismatch { expected: String, found: String },

    #[error("frame mismatch: operation requires the {expected} frame")]
    FrameMismatch { expected: &'static str },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("invalid multiplier: {0}")]
    InvalidMultiplier(String),

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("unsupported initial condition: {0}")]
    UnsupportedInitialCondition(String),

    #[error("resolution rule violated: {0}")]
    Resolution(String),

    #[error("step size {h} violates the step rule (limit {limit})")]
    StepSize { h: f64, limit: f64 },

    #[error("wraparound guard tripped at t = {time}: boundary mass {mass:e} exceeds {threshold:e}")]
    Wraparound { time: f64, mass: f64, threshold: f64 },

    #[error("blow-up guard tripped at t = {time}: {quantity} = {value:e} exceeds 1e3 x its initial value {initial:e}")]
    BlowUp {
        time: f64,
        quantity: &'static str,
        value: f64,
        initial: f64,
    },

    #[error("grid too large for the direct oracle: {n_modes} modes (limit 256)")]
    GridTooLarge { n_modes: usize },

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("series values must be positive (found {value} at t = {time})")]
    NonPositive { time: f64, value: f64 },

    #[error("record is not space-resonant")]
    NotSpaceResonant,

    #[error("snapshot format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn arg(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }
}
