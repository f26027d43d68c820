use thiserror::Error;

use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A formula denominator vanished at the requested parameter point.
    #[error("non-generic parameters: {0}")]
    NonGenericParameters(String),

    /// An `eps -> 0` limit does not exist.
    #[error("limit does not exist: pole at zero ({0})")]
    PoleAtZero(String),

    /// A truncated series lost the terms that decide its limit.
    #[error("series precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("coefficient of m_{0} has a nonzero imaginary part")]
    NonzeroImaginary(Partition),

    #[error("operation not supported for family {0}")]
    UnsupportedFamily(String),

    /// Hermite Pieri coefficients with |J| < r have no closed form.
    #[error("Hermite Pieri coefficient with |J| = {j} < r = {r} has no closed form")]
    HermiteGeneralCase { j: usize, r: usize },

    #[error("exponent map is not symmetric (monomial {0:?})")]
    NotSymmetric(Vec<u32>),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("parameters outside the supported set: {0}")]
    UnsupportedParameters(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
