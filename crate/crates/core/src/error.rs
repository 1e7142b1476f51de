use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A point or argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter bundle violates its invariants.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Successive quadrature refinements disagree by more than the requested tolerance.
    #[error("tolerance not met: estimated relative error {estimate:.3e} > {target:.3e} after {refinements} refinements")]
    ToleranceNotMet {
        estimate: f64,
        target: f64,
        refinements: usize,
    },

    /// A proposal density value exceeded the rejection envelope.
    #[error("envelope exceeded: density {density:.6e} > bound {bound:.6e}")]
    EnvelopeExceeded { density: f64, bound: f64 },

    /// Too many consecutive rejections while drawing one point.
    #[error("reject budget exhausted after {0} consecutive rejections")]
    RejectBudgetExhausted(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
