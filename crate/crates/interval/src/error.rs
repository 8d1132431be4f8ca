use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("enclosure is not representable: non-finite midpoint or radius")]
    NonFinite,
    #[error("negative radius {0}")]
    NegativeRadius(f64),
    #[error("division by a disc that contains zero")]
    ZeroInDisc,
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("zero divisor at entry ({0}, {1})")]
    ZeroDivisor(usize, usize),
    #[error("could not certify the inverse: contraction bound {0} is not below one")]
    VerificationFailed(f64),
    #[error("interval matrix may contain singular members (contraction bound {0})")]
    SingularInterval(f64),
}

pub type Result<T> = std::result::Result<T, IntervalError>;
