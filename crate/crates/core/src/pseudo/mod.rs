//! Pseudo-arithmetic semirings and the integrals built on them.

mod generator;
mod integral;
mod semiring;

use thiserror::Error;

use crate::exprdsl::{EvalError, FnError, ParseError};
use crate::numeric::QuadError;

pub use generator::{Family, Generator, TOL_INV};
pub use integral::{g_integral, lambda_limit_integral, pseudo_integral, sup_integral, PseudoIntegralResult, MIN_PANELS};
pub use semiring::Semiring;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PseudoError {
    #[error("invalid generator {0}")]
    InvalidGenerator(String),
    #[error("value {value} escapes the value interval [{lo}, {hi}]")]
    Range { value: f64, lo: f64, hi: f64 },
    #[error("{y} is outside the range of the generator")]
    InverseRange { y: f64 },
    #[error("operation needs a '{expected}' semiring, got '{found}'")]
    WrongSemiring { expected: &'static str, found: &'static str },
    #[error("{0}")]
    BadLambda(String),
    #[error("at least {MIN_PANELS} panels are required, got {0}")]
    BadPanels(usize),
    #[error("interval [{lo}, {hi}] is not inside the domain [{dlo}, {dhi}]")]
    Interval { lo: f64, hi: f64, dlo: f64, dhi: f64 },
    #[error("integral overflows the representable range")]
    Overflow,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Fn(#[from] FnError),
    #[error(transparent)]
    Quad(#[from] QuadError),
}
