use thiserror::Error;

use crate::poly::DensePoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("inadmissible q = {q}: {reason}")]
    InadmissibleQ { q: String, reason: &'static str },

    #[error("polynomial does not split over the rationals; residual factor {residual}")]
    DoesNotSplit { residual: DensePoly },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot parse number {0:?}")]
    ParseNumber(String),

    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
