//! Sugeno integrals, g-generated pseudo-integrals and checkers for
//! Diaz-Metcalf type integral inequalities on piecewise analytic functions.

pub mod exprdsl;
pub mod harness;
pub mod inequalities;
pub mod measures;
pub mod numeric;
pub mod pseudo;
pub mod sugeno;

pub use exprdsl::{Expr, Func, PiecewiseFn, RealFn};
pub use harness::{reproduce_paper_suite, run_config, HarnessError, RunConfig, SuiteResult};
pub use inequalities::{CheckError, CheckSpec, Direction, InequalityReport};
pub use measures::{FuzzyMeasure, Interval, IntervalUnion, SupMeasureDensity};
pub use pseudo::{Generator, PseudoError, PseudoIntegralResult, Semiring};
pub use sugeno::{SugenoError, SugenoResult};
