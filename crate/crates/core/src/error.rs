use thiserror::Error;

/// Unified error type for the solver pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("quadrature did not converge: partial value {value:.6e}, error estimate {error_estimate:.3e} > tol {tol:.3e} after {cells} cells")]
    QuadratureNonConvergence {
        value: f64,
        error_estimate: f64,
        tol: f64,
        cells: usize,
    },

    #[error("divergent tail: integrand decays like ρ^{{-{measured_power:.2}}} which is not integrable")]
    DivergentTail { measured_power: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point ({x:.4}, {y:.4}) lies outside the domain")]
    OutsideDomain { x: f64, y: f64 },

    #[error("Green's function evaluated at its pole x = p = ({x:.4}, {y:.4})")]
    GreenPole { x: f64, y: f64 },

    #[error("derivative extraction ill-conditioned: {0}")]
    IllConditioned(String),

    #[error("mesh does not resolve the concentration scale: {0}")]
    Resolution(String),

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error("near-resonant bordered system: smallest pivot {smallest:.3e}")]
    NearResonance { smallest: f64 },

    #[error("contraction failed after {iterations} iterations; last update {last_update:.3e}")]
    ContractionFailure {
        iterations: usize,
        last_update: f64,
        history: Vec<f64>,
    },

    #[error("no certified b-root in the search disk: {0}")]
    RootNotFound(String),

    #[error("configuration error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}
