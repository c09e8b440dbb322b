use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("shape mismatch: expected {expected} samples for {grid}, got {got}")]
    Shape {
        expected: usize,
        got: usize,
        grid: String,
    },
    #[error("parity mismatch: {0}")]
    Parity(String),
    #[error("incompatible grids: {0}")]
    GridMismatch(String),
    #[error("invalid window: {0}")]
    Window(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("time step {dt} rejected ({reason}); suggested dt <= {suggested:.3e}")]
    Cfl { dt: f64, suggested: f64, reason: String },
    #[error("non-positive density {value:.3e} at sample ({i1}, {i2}, {i3}), t = {t}")]
    Positivity {
        value: f64,
        i1: usize,
        i2: usize,
        i3: usize,
        t: f64,
    },
    #[error("non-finite value after step at t = {t} (last good time {last_good})")]
    NonFinite { t: f64, last_good: f64 },
    #[error("eigensolver failed: {0}")]
    Eigen(String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Numerical failures during integration, as opposed to bad input.
    pub fn is_solver_abort(&self) -> bool {
        matches!(
            self,
            Error::Positivity { .. } | Error::NonFinite { .. } | Error::Eigen(_)
        )
    }
}
