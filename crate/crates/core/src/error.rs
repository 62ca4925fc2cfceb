use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is singular at the requested point.
    #[error("singular point: {0}")]
    Singular(String),

    /// A potential profile or configuration failed validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A non-finite value appeared while compounding transfer matrices.
    #[error("numerical instability at segment {segment}: {detail}")]
    NumericalInstability { segment: usize, detail: String },

    /// Richardson extrapolation did not settle within tolerance.
    #[error("weak-field extrapolation did not converge: {sequence:?}")]
    Convergence { sequence: Vec<(f64, f64)> },

    /// Both spin branches have vanishing transmission.
    #[error("degenerate transmission: both spin amplitudes vanish")]
    DegenerateTransmission,

    /// The precession signal needed by a fluctuation estimator is absent.
    #[error("degenerate moments: {0}")]
    DegenerateMoments(String),
}

pub type Result<T> = std::result::Result<T, Error>;
