//! Interval-valued Δ-integrals on time scales.
//!
//! The crate models compact time scales ([`TimeScale`]), piecewise
//! interval-valued functions ([`IntervalFn`]) and computes their interval
//! Darboux ([`id_integral`]) and interval Riemann ([`ir_integral`])
//! Δ-integrals. The [`inequality`] module checks Jensen, Hölder,
//! Cauchy–Schwarz and Minkowski type inequalities numerically, and [`dsl`]
//! parses the text syntax used by the command-line tool.

// `!(x > 0.0)` style guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dsl;
pub mod error;
pub mod function;
pub mod inequality;
pub mod integrate;
pub mod interval;
pub mod partition;
pub mod time_scale;

pub use error::{Error, ParseError, Result};
pub use function::{Cond, Expr, IntervalFn, Piece, RealFn, SignClass};
pub use inequality::{
    check_convexity, CheckOptions, ConvexityReport, InequalityKind, InequalityReport, Relation, Shape,
};
pub use integrate::{
    darboux_sums, id_integral, id_integral_with, ir_integral, scalar_delta_integral, DarbouxBounds, IdOptions,
    IntegralResult, Method,
};
pub use interval::Interval;
pub use partition::{make_lemma1_division, refine, riemann_sum, validate_division, Division, TaggedDivision};
pub use time_scale::{Component, PointClass, Run, Side, TimeScale};
