use std::fmt;

use thiserror::Error;

use crate::interval::Interval;

/// Position and offending token of a DSL diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub token: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {} (at `{}`)",
            self.line, self.column, self.message, self.token
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by an interval containing zero: {0}")]
    DivisionByIntervalContainingZero(Interval),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("point {0} is not a member of the time scale")]
    PointNotInScale(f64),

    #[error("empty range [{a}, {b}]")]
    EmptyRange { a: f64, b: f64 },

    #[error("invalid time scale: {0}")]
    InvalidScale(String),

    #[error("invalid division: {0}")]
    InvalidDivision(String),

    #[error("evaluation failed at t = {t}: {message}")]
    Eval { t: f64, message: String },

    #[error("no piece covers t = {0}")]
    DomainCoverage(f64),

    #[error("inverted interval at t = {t}: [{lo}, {hi}]")]
    InvertedInterval { t: f64, lo: f64, hi: f64 },

    #[error("sign precondition violated: {0}")]
    SignPrecondition(String),

    #[error("function is not declared continuous; use the Darboux integral")]
    NotContinuous,

    #[error("no convergence: {message}; last bracket {bracket}")]
    NonConvergence { bracket: Interval, message: String },

    #[error("weight integral is not positive: {0}")]
    WeightDegenerate(f64),

    #[error("convexity precondition violated: function classified as {0}")]
    NotConvex(String),

    #[error("exponent error: {0}")]
    Exponent(String),

    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
