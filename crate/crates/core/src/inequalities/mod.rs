//! Checkers that evaluate both sides of Diaz-Metcalf type inequalities and
//! their relatives, producing self-contained reports.

mod checks;
mod transform;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exprdsl::{EvalError, FnError, PiecewiseFn};
use crate::measures::{FuzzyMeasure, MeasureError};
use crate::pseudo::{PseudoError, Semiring};
use crate::sugeno::SugenoError;

pub use checks::{
    check_classical_diaz_metcalf, check_phi_diaz_metcalf, check_pseudo_chebyshev, check_pseudo_diaz_metcalf,
    check_stolarsky, check_sugeno_diaz_metcalf, check_sup_diaz_metcalf, DEFAULT_LAMBDAS,
};
pub use transform::Transform;

/// Verdict tolerance on the slack.
pub const TOL_INEQ: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CheckError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Sugeno(#[from] SugenoError),
    #[error(transparent)]
    Pseudo(#[from] PseudoError),
    #[error(transparent)]
    Fn(#[from] FnError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Expected relation between the two sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `lhs ≥ rhs`
    Ge,
    /// `lhs ≤ rhs`
    Le,
}

impl Direction {
    pub fn slack(self, lhs: f64, rhs: f64) -> f64 {
        match self {
            Direction::Ge => lhs - rhs,
            Direction::Le => rhs - lhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Direction::Ge => ">=",
            Direction::Le => "<=",
        }
    }
}

/// Everything needed to re-run one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "checker", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CheckSpec {
    /// `∫f² dμ · ∫g² dμ ≤ (M+m)²/(4Mm) (∫fg dμ)²` with Sugeno integrals.
    ClassicalDiazMetcalf {
        f: PiecewiseFn,
        g: PiecewiseFn,
        measure: FuzzyMeasure,
        m: f64,
        #[serde(rename = "M")]
        big_m: f64,
    },
    /// `∫f^s dμ · ∫g^s dμ ≤ ∫(fg)^s dμ` with Sugeno integrals.
    SugenoDiazMetcalf { f: PiecewiseFn, g: PiecewiseFn, s: f64, measure: FuzzyMeasure },
    /// `∫⊕ f^s ⊙ h^s ≥ ∫⊕ f^s ⊙ ∫⊕ h^s` for a generated semiring.
    PseudoDiazMetcalf { f: PiecewiseFn, h: PiecewiseFn, s: f64, semiring: Semiring },
    /// The same with sup-integrals, plus the `g^λ` approximations of both sides.
    SupDiazMetcalf {
        f: PiecewiseFn,
        h: PiecewiseFn,
        s: f64,
        semiring: Semiring,
        #[serde(default = "default_lambdas")]
        lambdas: Vec<f64>,
    },
    /// `φ⁻¹(∫⊕ φ(f^s ⊙ h^s)) ≥ φ⁻¹(∫⊕ φ(f^s)) ⊙ φ⁻¹(∫⊕ φ(h^s))`, reversed for
    /// countermonotone operands.
    PhiDiazMetcalf { f: PiecewiseFn, h: PiecewiseFn, s: f64, semiring: Semiring, phi: String },
    /// `∫⊕ u ⊙ v ≥ ∫⊕ u ⊙ ∫⊕ v`.
    PseudoChebyshev { u: PiecewiseFn, v: PiecewiseFn, semiring: Semiring },
    /// `∫f(x^(1/(a+b))) dμ ≥ ∫f(x^(1/a)) dμ · ∫f(x^(1/b)) dμ` under Lebesgue measure.
    Stolarsky { f: PiecewiseFn, a: f64, b: f64 },
}

fn default_lambdas() -> Vec<f64> {
    DEFAULT_LAMBDAS.to_vec()
}

impl CheckSpec {
    pub fn checker(&self) -> &'static str {
        match self {
            CheckSpec::ClassicalDiazMetcalf { .. } => "classical-diaz-metcalf",
            CheckSpec::SugenoDiazMetcalf { .. } => "sugeno-diaz-metcalf",
            CheckSpec::PseudoDiazMetcalf { .. } => "pseudo-diaz-metcalf",
            CheckSpec::SupDiazMetcalf { .. } => "sup-diaz-metcalf",
            CheckSpec::PhiDiazMetcalf { .. } => "phi-diaz-metcalf",
            CheckSpec::PseudoChebyshev { .. } => "pseudo-chebyshev",
            CheckSpec::Stolarsky { .. } => "stolarsky",
        }
    }

    pub fn run(&self) -> Result<InequalityReport, CheckError> {
        checks::run(self)
    }
}

/// Names accepted by [`CheckSpec::checker`].
pub const CHECKERS: [&str; 7] = [
    "classical-diaz-metcalf",
    "sugeno-diaz-metcalf",
    "pseudo-diaz-metcalf",
    "sup-diaz-metcalf",
    "phi-diaz-metcalf",
    "pseudo-chebyshev",
    "stolarsky",
];

/// One checker run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Signed so that `slack ≥ 0` means the expected relation holds.
    pub slack: f64,
    pub holds: bool,
    pub tol: f64,
    pub direction: Direction,
    /// Set when the operands do not satisfy the hypotheses.
    pub advisory: bool,
    pub context: CheckSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl InequalityReport {
    pub(crate) fn new(context: CheckSpec, lhs: f64, rhs: f64, direction: Direction) -> Self {
        let slack = direction.slack(lhs, rhs);
        InequalityReport {
            name: context.checker().to_string(),
            lhs,
            rhs,
            slack,
            holds: slack >= -TOL_INEQ,
            tol: TOL_INEQ,
            direction,
            advisory: false,
            context,
            details: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn detail(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.details.insert(key.to_string(), value.into());
    }

    pub(crate) fn advise(&mut self, note: impl Into<String>) {
        self.advisory = true;
        self.notes.push(note.into());
    }

    /// A numeric detail recorded by the checker.
    pub fn detail_f64(&self, key: &str) -> Option<f64> {
        self.details.get(key).and_then(|v| v.as_f64())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}
