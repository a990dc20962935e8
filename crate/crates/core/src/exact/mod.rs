//! Exact arithmetic: rationals, polynomials in `n` and rational functions of `n`.
//! Nothing in this crate uses floating point.

mod poly;
mod ratfunc;
mod rational;

pub use poly::PolyN;
pub use ratfunc::{rf_eval, rf_simplify, RationalFunctionN};
pub use rational::{
    approx_decimal, format_rational, frac, int, parse_rational, rat_normalize, ParseRationalError, Rational,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero denominator polynomial")]
    ZeroPolynomial,
    #[error("pole")]
    Pole,
}
