use crate::geometry::Violation;
use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0:?}")]
    Invalid(Vec<Violation>),
    #[error("Euler characteristic {value} is not an integer")]
    NonIntegerEuler { value: f64 },
    #[error("curvature must be exactly -1 for this series")]
    WrongCurvature,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no closed form for power {0} (supported: 1, 2, 3)")]
    UnsupportedPower(u32),
    #[error("not converged: {0}")]
    NonConvergent(String),
    #[error("ill-conditioned fit: condition {condition:.3e} exceeds cap {cap:.3e}")]
    IllConditioned { condition: f64, cap: f64 },
    #[error("need at least {need} samples, got {have}")]
    InsufficientSamples { have: usize, need: usize },
    #[error("series ranges differ: {0}")]
    RangeMismatch(String),
    #[error("series lacks the coefficient of t^({n}/2)")]
    MissingCoefficient { n: i32 },
    #[error("perimeter is zero and the t^0 coefficient is unavailable")]
    ZeroPerimeterAmbiguous,
    #[error("curvature is zero: only the first vertex sum is determined")]
    ZeroCurvature,
    #[error("dominant-ratio estimate {ratio} at index {index} is not positive")]
    NegativeRatio { index: usize, ratio: f64 },
    #[error("angle {value} rad is not of the form pi/q")]
    NonReciprocalAngle { value: f64 },
    #[error("quadrature failed: estimate {estimate:.6e}, error {error:.3e}")]
    QuadratureFailure { estimate: f64, error: f64 },
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergent(_)
                | Error::IllConditioned { .. }
                | Error::NegativeRatio { .. }
                | Error::QuadratureFailure { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
