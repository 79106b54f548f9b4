//! Exact verification engine for Touchard-type continued fractions.
//!
//! Continued fractions of the form `1/(b - a_1·w/(b - a_2·w/…))` are expanded
//! as truncated power series whose coefficients are Laurent polynomials in `q`
//! with rational coefficients, and compared without any tolerance against
//! independently built closed forms, recurrences and coefficient identities.

pub mod arith;
pub mod contfrac;
pub mod dsl;
pub mod identities;
pub mod qcomb;

pub use arith::{ArithError, BiPoly, LaurentPoly, QCoeff, QRatFun, TruncSeries, Var};
