//! Exact arithmetic: rational scalars, Laurent polynomials in `q`, formal
//! quotients, and truncated power series.

mod bipoly;
mod coeff;
mod laurent;
mod ratfun;
mod series;

pub use bipoly::BiPoly;
pub use coeff::QCoeff;
pub use laurent::LaurentPoly;
pub use ratfun::{BiRatFun, PolyRing, QRatFun, RatFun};
pub use series::{BinOp, TruncSeries, Var, DEFAULT_QMAX};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("series variables differ: {left} vs {right}")]
    VariableMismatch { left: Var, right: Var },
    #[error("constant term `{constant}` is not invertible")]
    NonInvertible { constant: String },
    #[error("inner series of a composition has nonzero constant term `{constant}`")]
    NonZeroConstant { constant: String },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("`{divisor}` does not divide `{dividend}`")]
    NotDivisible { dividend: String, divisor: String },
}
