use std::path::PathBuf;

/// Errors raised by the sampling, sensing and harness layers.
///
/// Solver non-convergence is not an error: it is reported through
/// [`crate::solver::SolverResult::converged`].
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("center frequency {center_frequency} Hz must lie in (0, {nyquist}) Hz")]
    AboveNyquist { center_frequency: f64, nyquist: f64 },

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("could not place {dof} events with guard {guard} in {length} bins after {attempts} attempts")]
    SceneUnsatisfiable {
        dof: usize,
        guard: usize,
        length: usize,
        attempts: usize,
    },

    #[error("invalid band [{lower}, {upper}] for length {length}: need 0 < lower <= upper < length/2")]
    InvalidBand {
        lower: usize,
        upper: usize,
        length: usize,
    },

    #[error("requested {requested} samples but the band only holds {available} bins")]
    TooManySamples { requested: usize, available: usize },

    #[error("spectral energy profile is identically zero over the band")]
    ZeroEnergy,

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("dictionary atom is identically zero")]
    ZeroAtom,

    #[error("invalid solver input: {0}")]
    InvalidProblem(String),

    #[error("malformed sampling plan at line {line}: {message}")]
    PlanFormat { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("output directory {path} is not writable: {source}")]
    OutputDir {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
