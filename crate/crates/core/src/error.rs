use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    /// Parameters violate `q_minus > q_plus > 0, beta > 0`.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive step size collapsed below the floor.
    #[error("step size underflow at phi={phi} (last valid state x={x}, y={y})")]
    Stiffness { phi: f64, x: f64, y: f64 },

    /// A shooting trajectory neither exited nor reached a corner before the horizon.
    #[error("trajectory from x0={x0} still interior at horizon {horizon} (ended at x={x}, y={y})")]
    HorizonTooShort {
        x0: f64,
        horizon: f64,
        x: f64,
        y: f64,
    },

    /// No suitable real eigen-direction exists for the requested construction.
    #[error("spectral error: {0}")]
    Spectral(String),

    /// Invariant that should be impossible to violate.
    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
