//! The small expression language used for integrands, distortions,
//! generators and transforms, plus piecewise functions built from it.

mod ast;
mod func;
mod monotone;
mod parser;
mod piecewise;

use thiserror::Error;

pub use ast::{power, BinaryOp, Exponent, Expr, Printer, UnaryOp};
pub use func::{ClosureFn, Func, RealFn};
pub use monotone::{
    classify_monotonicity, classify_on, comonotone, countermonotone, sample_grid, MonotonicityClass, DEFAULT_GRID,
    TOL_COMONO,
};
pub use parser::{parse_constant, parse_expr, parse_expr_in};
pub use piecewise::{parse_interval, FnDef, PiecewiseFn, Segment, SegmentDef};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("non-ASCII byte at offset {offset}")]
    NonAscii { offset: usize },
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier '{name}' at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("exponent at offset {offset} must be a constant")]
    NonConstantExponent { offset: usize },
    #[error("'{text}' is not a constant expression")]
    NotConstant { text: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("{op} undefined at {value}")]
    Domain { op: &'static str, value: f64 },
    #[error("non-finite value at x = {x}")]
    NonFinite { x: f64 },
    #[error("x = {x} outside the domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FnError {
    #[error("a piecewise function needs at least one segment")]
    Empty,
    #[error("segments leave a gap at {at}")]
    Gap { at: f64 },
    #[error("segments overlap at {at}")]
    Overlap { at: f64 },
    #[error("malformed interval '{0}'")]
    BadInterval(String),
    #[error("segment {segment} does not evaluate at x = {x}: {source}")]
    NotFinite { segment: usize, x: f64, source: EvalError },
    #[error("functions live on different domains {left:?} and {right:?}")]
    DomainMismatch { left: (f64, f64), right: (f64, f64) },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
