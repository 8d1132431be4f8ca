use riccati_interval::IntervalError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("sign iteration did not converge: eigenvalues too close to the imaginary axis")]
    NoSplitting,
    #[error("first block of the stable basis is numerically singular")]
    SingularU1,
    #[error("eigensolver did not converge")]
    EigFailure,
    #[error("divisor matrix has a zero entry at ({0}, {1})")]
    ZeroDivisor(usize, usize),
    #[error("could not enclose the inverse of {0}")]
    InverseEnclosureFailed(&'static str),
    #[error("no inclusion after {0} iterations")]
    VerificationFailed(usize),
    #[error("approximate closed-loop matrix is not Hurwitz (max real part {0})")]
    UnstableClosedLoop(f64),
    #[error("no swap set with entries bounded by {0} within the toggle budget")]
    SelectionFailed(f64),
    #[error("recovered system may be singular")]
    SingularInterval,
    #[error("norm enclosure contains zero")]
    ZeroNorm,
    #[error("interval residual over the enclosure excludes zero")]
    ResidualCheckFailed,
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

impl CoreError {
    /// Short tag naming the stage that failed, used in reports.
    pub fn stage(&self) -> &'static str {
        match self {
            CoreError::InvalidProblem(_) => "input",
            CoreError::NoSplitting | CoreError::SingularU1 | CoreError::EigFailure => "approx",
            CoreError::ZeroDivisor(..) | CoreError::InverseEnclosureFailed(_) => "setup",
            CoreError::VerificationFailed(_) => "iteration",
            CoreError::UnstableClosedLoop(_) => "shift",
            CoreError::SelectionFailed(_) => "selection",
            CoreError::SingularInterval => "recover",
            CoreError::ZeroNorm => "metrics",
            CoreError::ResidualCheckFailed => "postcheck",
            CoreError::Interval(_) => "interval",
        }
    }

    /// Whether the error is an ordinary verification failure rather than a
    /// breakdown of the surrounding machinery.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            CoreError::VerificationFailed(_)
                | CoreError::ZeroDivisor(..)
                | CoreError::InverseEnclosureFailed(_)
                | CoreError::SingularInterval
                | CoreError::Interval(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
