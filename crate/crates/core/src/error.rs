use thiserror::Error;

use crate::numerics::ValueWithError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite term at index {index}")]
    NonFiniteTerm { index: usize },

    #[error("integrand not finite at x = {x}")]
    NonFiniteIntegrand { x: f64 },

    #[error("tolerance {target:e} not reached; best estimate {best}")]
    ToleranceNotReached { target: f64, best: ValueWithError },

    #[error("acceleration breakdown: {0}")]
    AccelerationBreakdown(&'static str),

    #[error("quadrature did not converge; best estimate {best}")]
    QuadratureStall { best: ValueWithError },

    #[error("gamma function pole at {0}")]
    GammaPole(f64),

    #[error("harmonic number pole at a = {0}")]
    HarmonicPole(f64),

    #[error("argument outside domain: {0}")]
    OutsideDomain(String),

    #[error("divergent: {0}")]
    Divergent(String),

    #[error("lower parameter {0} is a non-positive integer")]
    ParameterPole(f64),

    #[error("routes disagree: {a} vs {b}")]
    RouteDisagreement { a: ValueWithError, b: ValueWithError },

    #[error("rational reconstruction failed: {0}")]
    ReconstructionFailed(String),

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
}

impl Error {
    pub(crate) fn outside(msg: impl Into<String>) -> Self {
        Error::OutsideDomain(msg.into())
    }
}

/// Applies a transformation to a result's value, including the best estimate
/// carried by a convergence failure.
pub trait MapEstimate {
    fn map_estimate(self, f: impl Fn(ValueWithError) -> ValueWithError) -> Self;
}

impl MapEstimate for Result<ValueWithError> {
    fn map_estimate(self, f: impl Fn(ValueWithError) -> ValueWithError) -> Self {
        match self {
            Ok(v) => Ok(f(v)),
            Err(Error::ToleranceNotReached { target, best }) => {
                Err(Error::ToleranceNotReached { target, best: f(best) })
            }
            Err(Error::QuadratureStall { best }) => Err(Error::QuadratureStall { best: f(best) }),
            Err(e) => Err(e),
        }
    }
}
